//! Strong reality of a single matrix by scanning its reversing space.
//!
//! Every h with h g = g⁻¹ h lies in the nullspace of a linear system whose
//! dimension equals that of the commutant of g (when g is real). The scan
//! walks all GF(q²)-combinations of a basis looking for a unitary
//! involution.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field_tower::{Elem, Fq2};

use super::group::HermitianForm;
use super::linalg::{inverse, nullspace};
use super::matrix::Matrix;

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const BUDGET_ENV: &str = "STRONGREAL_BUDGET";

/// The default budget, overridden by `STRONGREAL_BUDGET` when it parses.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Basis of {h : h g = g⁻¹ h}.
pub fn reversing_space(f: &Fq2, g: &Matrix) -> Result<Vec<Matrix>> {
    let n = g.rows();
    let gi = inverse(f, g)?;
    // (h g)_{ij} = Σ_l h_{il} g_{lj};  (g⁻¹ h)_{ij} = Σ_k gi_{ik} h_{kj}
    let mut system = Matrix::zero(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for l in 0..n {
                let col = i * n + l;
                system.set(row, col, f.add(system.get(row, col), g.get(l, j)));
            }
            for k in 0..n {
                let col = k * n + j;
                system.set(row, col, f.sub(system.get(row, col), gi.get(i, k)));
            }
        }
    }
    Ok(nullspace(f, &system)
        .into_iter()
        .map(|v| Matrix::from_vec(n, n, v).expect("n² entries"))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReversalSearch {
    /// A unitary involution conjugating g to g⁻¹.
    Found(Matrix),
    /// The full space was scanned without success.
    NotFound,
    /// The space has more than `budget` elements.
    Exhausted { space_size: u128 },
}

impl ReversalSearch {
    pub fn decided(&self) -> Option<bool> {
        match self {
            ReversalSearch::Found(_) => Some(true),
            ReversalSearch::NotFound => Some(false),
            ReversalSearch::Exhausted { .. } => None,
        }
    }
}

fn space_size(f: &Fq2, dim: usize) -> u128 {
    (f.order() as u128)
        .checked_pow(dim as u32)
        .unwrap_or(u128::MAX)
}

fn combination(f: &Fq2, basis: &[Matrix], mut idx: u128) -> Matrix {
    let n = basis[0].rows();
    let order = f.order() as u128;
    let mut h = Matrix::zero(n, n);
    for b in basis {
        let c = Elem((idx % order) as u16);
        idx /= order;
        if !c.is_zero() {
            h = h.add(f, &b.scale(f, c));
        }
    }
    h
}

fn is_unitary_involution(f: &Fq2, form: &HermitianForm, h: &Matrix) -> bool {
    h.mul(f, h).is_identity() && form.preserves(f, h)
}

/// The first witness in scan order, or why none was returned.
pub fn find_reversing_involution(
    f: &Fq2,
    form: &HermitianForm,
    g: &Matrix,
    budget: u128,
) -> Result<ReversalSearch> {
    let basis = reversing_space(f, g)?;
    if basis.is_empty() {
        return Ok(ReversalSearch::NotFound);
    }
    let size = space_size(f, basis.len());
    if size > budget {
        return Ok(ReversalSearch::Exhausted { space_size: size });
    }
    let hit = (0..size as u64)
        .into_par_iter()
        .map(|i| combination(f, &basis, i as u128))
        .find_first(|h| is_unitary_involution(f, form, h));
    Ok(hit.map_or(ReversalSearch::NotFound, ReversalSearch::Found))
}

/// Every unitary involution h with h g h = g⁻¹, in scan order.
pub fn all_reversing_involutions(
    f: &Fq2,
    form: &HermitianForm,
    g: &Matrix,
    budget: u128,
) -> Result<Vec<Matrix>> {
    let basis = reversing_space(f, g)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let size = space_size(f, basis.len());
    if size > budget {
        return Err(Error::BudgetExceeded(format!(
            "reversing space has {size} elements, budget {budget}"
        )));
    }
    Ok((0..size as u64)
        .into_par_iter()
        .map(|i| combination(f, &basis, i as u128))
        .filter(|h| is_unitary_involution(f, form, h))
        .collect())
}
