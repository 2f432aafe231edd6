//! Explicit unitary representatives of class data.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classdata::ClassDatum;
use crate::error::{Error, Result};
use crate::field_tower::{Elem, Fq2};
use crate::upoly::UnitaryCtx;

use super::extract::extract_class_datum;
use super::group::{orthonormal_basis, HermitianForm};
use super::linalg::{determinant, inverse, nullspace};
use super::matrix::Matrix;

const MAX_ATTEMPTS: usize = 20_000;

/// ⊕ companion(f^λ) over the blocks and parts of the datum.
pub fn rational_form(ctx: &UnitaryCtx, datum: &ClassDatum) -> Matrix {
    let f = ctx.field();
    let blocks: Vec<Matrix> = datum
        .blocks()
        .iter()
        .flat_map(|(u, p)| {
            p.parts()
                .iter()
                .map(|&l| Matrix::companion(f, u.poly().pow(f, l as usize).coeffs()))
                .collect::<Vec<_>>()
        })
        .collect();
    Matrix::direct_sum(&blocks)
}

/// Basis of the Hermitian X with ᵀḡ X g = X, as a GF(q)-space.
fn invariant_hermitian_basis(f: &Fq2, g: &Matrix) -> Vec<Matrix> {
    let n = g.rows();
    let mut system = Matrix::zero(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let a = f.conj(g.get(k, i));
                if a.is_zero() {
                    continue;
                }
                for l in 0..n {
                    let col = k * n + l;
                    let v = f.add(system.get(row, col), f.mul(a, g.get(l, j)));
                    system.set(row, col, v);
                }
            }
            system.set(row, row, f.sub(system.get(row, row), Elem::ONE));
        }
    }
    let omega = f.omega();
    nullspace(f, &system)
        .into_iter()
        .flat_map(|v| {
            let b = Matrix::from_vec(n, n, v).expect("n² entries");
            let wb = b.scale(f, omega);
            [b.add(f, &b.adjoint(f)), wb.add(f, &wb.adjoint(f))]
        })
        .filter(|h| h.data().iter().any(|a| !a.is_zero()))
        .collect()
}

/// A matrix preserving `form` whose class datum is `datum`.
///
/// Starts from the rational canonical form g0, picks a nondegenerate
/// Hermitian X fixed by g0 (seeded random search over GF(q)-combinations),
/// and transports the isometry (X → J) onto g0.
pub fn realize_class(
    ctx: &UnitaryCtx,
    datum: &ClassDatum,
    form: &HermitianForm,
    seed: u64,
) -> Result<Matrix> {
    let f = ctx.field();
    if form.dim() != datum.n() {
        return Err(Error::Dimension);
    }
    let g0 = rational_form(ctx, datum);
    let basis = invariant_hermitian_basis(f, &g0);
    if basis.is_empty() {
        return Err(Error::RealizationFailed(
            "no invariant Hermitian form".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scalars = f.base_field();
    let n = datum.n();
    let x = (0..MAX_ATTEMPTS)
        .map(|_| {
            basis.iter().fold(Matrix::zero(n, n), |acc, h| {
                acc.add(
                    f,
                    &h.scale(f, *scalars.choose(&mut rng).expect("nonempty field")),
                )
            })
        })
        .find(|x| determinant(f, x).is_ok_and(|d| !d.is_zero()))
        .ok_or_else(|| Error::RealizationFailed("no nondegenerate invariant form found".into()))?;
    let b = orthonormal_basis(f, &x)?;
    let a = form.orthonormal_basis(f)?;
    let p = a.mul(f, &inverse(f, &b)?);
    let g = p.mul(f, &g0).mul(f, &inverse(f, &p)?);
    if !form.preserves(f, &g) {
        return Err(Error::RealizationFailed("result is not unitary".into()));
    }
    if extract_class_datum(ctx, &g)? != *datum {
        return Err(Error::RealizationFailed("class datum changed".into()));
    }
    Ok(g)
}
