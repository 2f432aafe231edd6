//! Explicit unitary groups: forms, enumeration, conjugacy classes.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_tower::{Elem, Fq2};

use super::linalg::{determinant, inverse};
use super::matrix::Matrix;

/// A nondegenerate Hermitian Gram matrix J: ᵀJ̄ = J, det J ≠ 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    name: String,
    gram: Matrix,
}

impl HermitianForm {
    pub fn new(f: &Fq2, name: impl Into<String>, gram: Matrix) -> Result<Self> {
        if !gram.is_square() || gram.adjoint(f) != gram || determinant(f, &gram)?.is_zero() {
            return Err(Error::BadForm);
        }
        Ok(HermitianForm {
            name: name.into(),
            gram,
        })
    }

    pub fn identity(n: usize) -> Self {
        HermitianForm {
            name: format!("I{n}"),
            gram: Matrix::identity(n),
        }
    }

    /// Direct sum of anti-diagonal blocks N_d (d ≥ 1; N_1 = [1]).
    pub fn anti_diagonal_blocks(f: &Fq2, sizes: &[usize]) -> Result<Self> {
        let blocks: Vec<Matrix> = sizes.iter().map(|&d| Matrix::anti_identity(d)).collect();
        let name = sizes
            .iter()
            .map(|d| format!("N{d}"))
            .collect::<Vec<_>>()
            .join("+");
        Self::new(f, name, Matrix::direct_sum(&blocks))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.gram.is_identity()
    }

    /// h(v, w) = ᵀv̄ J w
    pub fn pair(&self, f: &Fq2, v: &[Elem], w: &[Elem]) -> Elem {
        hermitian_pair(f, &self.gram, v, w)
    }

    /// A matrix A with ᵀĀ J A = I.
    pub fn orthonormal_basis(&self, f: &Fq2) -> Result<Matrix> {
        orthonormal_basis(f, &self.gram)
    }

    pub fn preserves(&self, f: &Fq2, g: &Matrix) -> bool {
        g.preserves_form(f, &self.gram)
    }
}

fn hermitian_pair(f: &Fq2, gram: &Matrix, v: &[Elem], w: &[Elem]) -> Elem {
    let jw = gram.mul_vec(f, w);
    v.iter()
        .zip(&jw)
        .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(f.conj(a), b)))
}

/// Hermitian Gram–Schmidt: columns b_i with ᵀb̄_i X b_j = δ_ij.
pub fn orthonormal_basis(f: &Fq2, gram: &Matrix) -> Result<Matrix> {
    let n = gram.rows();
    let mut pending: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut v = vec![Elem::ZERO; n];
            v[i] = Elem::ONE;
            v
        })
        .collect();
    let mut done: Vec<Vec<Elem>> = Vec::with_capacity(n);
    while !pending.is_empty() {
        let pick = match (0..pending.len())
            .find(|&i| !hermitian_pair(f, gram, &pending[i], &pending[i]).is_zero())
        {
            Some(i) => i,
            None => {
                // every remaining vector is isotropic: combine a non-orthogonal pair
                let (i, j, h) = (0..pending.len())
                    .flat_map(|i| (i + 1..pending.len()).map(move |j| (i, j)))
                    .map(|(i, j)| (i, j, hermitian_pair(f, gram, &pending[i], &pending[j])))
                    .find(|(_, _, h)| !h.is_zero())
                    .ok_or(Error::BadForm)?;
                let c = f
                    .nonzero()
                    .find(|&c| !f.trace(f.mul(c, h)).is_zero())
                    .expect("trace is surjective");
                let vj = pending[j].clone();
                for (a, b) in pending[i].iter_mut().zip(vj) {
                    *a = f.add(*a, f.mul(c, b));
                }
                i
            }
        };
        let v = pending.remove(pick);
        let norm = hermitian_pair(f, gram, &v, &v);
        let root = f.norm_preimage(norm).ok_or(Error::BadForm)?;
        let scale = f.inv(root).ok_or(Error::BadForm)?;
        let u: Vec<Elem> = v.iter().map(|&a| f.mul(a, scale)).collect();
        for w in pending.iter_mut() {
            let c = hermitian_pair(f, gram, &u, w);
            if !c.is_zero() {
                for (a, &b) in w.iter_mut().zip(&u) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        done.push(u);
    }
    let mut b = Matrix::zero(n, n);
    for (j, col) in done.iter().enumerate() {
        for (i, &a) in col.iter().enumerate() {
            b.set(i, j, a);
        }
    }
    Ok(b)
}

/// The identity form and the block forms used by the explicit representatives.
pub fn standard_forms(f: &Fq2, n: usize) -> Result<Vec<HermitianForm>> {
    let mut out = vec![HermitianForm::identity(n)];
    for r in 1..=n / 2 {
        let mut sizes = vec![2 * r];
        sizes.extend(std::iter::repeat_n(1, n - 2 * r));
        out.push(HermitianForm::anti_diagonal_blocks(f, &sizes)?);
    }
    if n == 4 {
        out.push(HermitianForm::anti_diagonal_blocks(f, &[3, 1])?);
    }
    if n == 5 {
        out.push(HermitianForm::anti_diagonal_blocks(f, &[3, 2])?);
    }
    if n >= 3 && n.is_multiple_of(3) {
        out.push(HermitianForm::anti_diagonal_blocks(f, &[n])?);
    }
    Ok(out)
}

/// |U(n, q)| = q^{n(n−1)/2} ∏_{i=1}^n (q^i − (−1)^i).
pub fn unitary_group_order(n: usize, q: u64) -> u128 {
    let q = q as i128;
    let mut order: i128 = q.pow((n * n.saturating_sub(1) / 2) as u32);
    for i in 1..=n as u32 {
        order *= q.pow(i) - if i % 2 == 0 { 1 } else { -1 };
    }
    order as u128
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Filter all matrices by the unitarity equation, column by column.
    Entrywise,
    /// Close a seed set under multiplication.
    Closure,
    /// Entrywise when the raw candidate count is at most `auto_entrywise`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupBounds {
    /// Maximum (q²)^{n²} for the entrywise strategy.
    pub entry_scan: u128,
    /// Maximum predicted order for the closure strategy.
    pub closure_order: u128,
    /// `Auto` picks entrywise at or below this many raw candidates.
    pub auto_entrywise: u128,
}

impl Default for GroupBounds {
    fn default() -> Self {
        GroupBounds {
            entry_scan: 100_000_000,
            closure_order: 2_000_000,
            auto_entrywise: 1_000_000,
        }
    }
}

/// Conjugacy classes as an assignment of element indices to class ids.
#[derive(Debug, Clone)]
pub struct Classes {
    pub class_of: Vec<u32>,
    /// Smallest element index in each class, classes ordered by it.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

/// A fully materialized unitary group, elements sorted by packed key.
#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    form: HermitianForm,
    strategy: Strategy,
    bits: u32,
    elements: Vec<Matrix>,
    index: HashMap<u128, usize>,
    generators: Vec<Matrix>,
}

impl GroupEnumeration {
    pub fn form(&self) -> &HermitianForm {
        &self.form
    }
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }
    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn index_of(&self, g: &Matrix) -> Option<usize> {
        g.pack(self.bits).and_then(|k| self.index.get(&k).copied())
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        self.index_of(g).is_some()
    }

    /// Elements with s² = 1 (the identity included), in index order.
    pub fn involutions(&self, f: &Fq2) -> Vec<usize> {
        (0..self.elements.len())
            .into_par_iter()
            .filter(|&i| self.elements[i].mul(f, &self.elements[i]).is_identity())
            .collect()
    }

    /// Orbits under conjugation by the generators.
    pub fn conjugacy_classes(&self, f: &Fq2) -> Result<Classes> {
        let gens: Vec<(Matrix, Matrix)> = self
            .generators
            .iter()
            .map(|s| Ok((s.clone(), inverse(f, s)?)))
            .collect::<Result<_>>()?;
        let mut class_of = vec![u32::MAX; self.elements.len()];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for start in 0..self.elements.len() {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(start);
            class_of[start] = id;
            let mut size = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for (s, si) in &gens {
                    let y = s.mul(f, &self.elements[x]).mul(f, si);
                    let j = self.index_of(&y).ok_or(Error::NotUnitary)?;
                    if class_of[j] == u32::MAX {
                        class_of[j] = id;
                        size += 1;
                        queue.push_back(j);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(Classes {
            class_of,
            representatives,
            sizes,
        })
    }

    fn from_elements(
        f: &Fq2,
        form: HermitianForm,
        strategy: Strategy,
        mut elements: Vec<Matrix>,
        generators: Option<Vec<Matrix>>,
    ) -> Result<Self> {
        let bits = Matrix::entry_bits(f);
        let mut keyed: Vec<(u128, Matrix)> = elements
            .drain(..)
            .map(|m| Ok((m.pack(bits).ok_or_else(too_wide)?, m)))
            .collect::<Result<_>>()?;
        keyed.sort_by_key(|(k, _)| *k);
        keyed.dedup_by_key(|(k, _)| *k);
        let index = keyed
            .iter()
            .enumerate()
            .map(|(i, (k, _))| (*k, i))
            .collect();
        let elements: Vec<Matrix> = keyed.into_iter().map(|(_, m)| m).collect();
        let generators = match generators {
            Some(g) => g,
            None => greedy_generators(f, &elements, bits)?,
        };
        Ok(GroupEnumeration {
            form,
            strategy,
            bits,
            elements,
            index,
            generators,
        })
    }
}

fn too_wide() -> Error {
    Error::BudgetExceeded("matrix does not fit a 128-bit key".into())
}

/// A small generating set: walk the elements in order, keeping each one not
/// already in the subgroup generated so far.
fn greedy_generators(f: &Fq2, elements: &[Matrix], bits: u32) -> Result<Vec<Matrix>> {
    let n = elements.first().map_or(0, Matrix::rows);
    let mut closure = Closure::new(f, n, bits, u128::MAX);
    for g in elements {
        if closure.len() == elements.len() {
            break;
        }
        closure.absorb(g)?;
    }
    Ok(closure.gens)
}

struct Closure<'a> {
    f: &'a Fq2,
    bits: u32,
    bound: u128,
    set: HashSet<u128>,
    elements: Vec<Matrix>,
    gens: Vec<Matrix>,
}

impl<'a> Closure<'a> {
    fn new(f: &'a Fq2, n: usize, bits: u32, bound: u128) -> Self {
        let id = Matrix::identity(n);
        let mut set = HashSet::new();
        set.insert(id.pack(bits).unwrap_or(0));
        Closure {
            f,
            bits,
            bound,
            set,
            elements: vec![id],
            gens: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    /// Adds `s` to the generators unless it is already a member.
    fn absorb(&mut self, s: &Matrix) -> Result<()> {
        let key = s.pack(self.bits).ok_or_else(too_wide)?;
        if self.set.contains(&key) {
            return Ok(());
        }
        self.gens.push(s.clone());
        let old = self.elements.len();
        let mut queue: VecDeque<(usize, bool)> = (0..old).map(|i| (i, true)).collect();
        while let Some((i, only_new)) = queue.pop_front() {
            let gens: &[Matrix] = if only_new {
                &self.gens[self.gens.len() - 1..]
            } else {
                &self.gens
            };
            let x = self.elements[i].clone();
            let products: Vec<Matrix> = gens.iter().map(|g| x.mul(self.f, g)).collect();
            for y in products {
                let k = y.pack(self.bits).ok_or_else(too_wide)?;
                if self.set.insert(k) {
                    self.elements.push(y);
                    if self.elements.len() as u128 > self.bound {
                        return Err(Error::BudgetExceeded(format!(
                            "closure passed {} elements",
                            self.bound
                        )));
                    }
                    queue.push_back((self.elements.len() - 1, false));
                }
            }
        }
        Ok(())
    }
}

/// All unitary 2×2 matrices for the identity form.
fn unitary_2x2(f: &Fq2) -> Vec<Matrix> {
    entrywise_scan(f, &Matrix::identity(2))
}

/// Column-by-column search: column j must pair correctly with itself and
/// every earlier column.
fn entrywise_scan(f: &Fq2, gram: &Matrix) -> Vec<Matrix> {
    let n = gram.rows();
    let order = f.order();
    let total = order.pow(n as u32);
    let vectors: Vec<Vec<Elem>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let e = Elem((idx % order) as u16);
                    idx /= order;
                    e
                })
                .collect()
        })
        .collect();
    let jv: Vec<Vec<Elem>> = vectors.iter().map(|v| gram.mul_vec(f, v)).collect();
    let pair = |a: usize, b: usize| -> Elem {
        vectors[a]
            .iter()
            .zip(&jv[b])
            .fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(f.conj(x), y)))
    };
    // columns allowed in position j: h(c, c) = J_jj
    let by_diag: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            (0..total)
                .filter(|&c| pair(c, c) == gram.get(j, j))
                .collect()
        })
        .collect();

    fn extend(
        j: usize,
        n: usize,
        cols: &mut Vec<usize>,
        by_diag: &[Vec<usize>],
        gram: &Matrix,
        pair: &dyn Fn(usize, usize) -> Elem,
        out: &mut Vec<Vec<usize>>,
    ) {
        if j == n {
            out.push(cols.clone());
            return;
        }
        for &c in &by_diag[j] {
            if cols
                .iter()
                .enumerate()
                .all(|(i, &ci)| pair(ci, c) == gram.get(i, j) && pair(c, ci) == gram.get(j, i))
            {
                cols.push(c);
                extend(j + 1, n, cols, by_diag, gram, pair, out);
                cols.pop();
            }
        }
    }

    let found: Vec<Vec<usize>> = by_diag[0]
        .par_iter()
        .flat_map_iter(|&c0| {
            let mut out = Vec::new();
            let mut cols = vec![c0];
            extend(1, n, &mut cols, &by_diag, gram, &pair, &mut out);
            out
        })
        .collect();
    found
        .into_iter()
        .map(|cols| {
            let mut m = Matrix::zero(n, n);
            for (j, &c) in cols.iter().enumerate() {
                for i in 0..n {
                    m.set(i, j, vectors[c][i]);
                }
            }
            m
        })
        .collect()
}

/// Seeds for the closure strategy with the identity form: unitary diagonals,
/// permutation matrices, and 2×2 unitary blocks at adjacent positions.
fn identity_form_seeds(f: &Fq2, n: usize) -> Vec<Matrix> {
    let units: Vec<Elem> = f.nonzero().filter(|&a| f.norm(a) == Elem::ONE).collect();
    let mut seeds = Vec::new();
    // one nontrivial unit on the diagonal at a time generates them all
    for i in 0..n {
        for &u in &units {
            let mut d = vec![Elem::ONE; n];
            d[i] = u;
            seeds.push(Matrix::diagonal(&d));
        }
    }
    for i in 0..n.saturating_sub(1) {
        let mut p = Matrix::identity(n);
        p.set(i, i, Elem::ZERO);
        p.set(i + 1, i + 1, Elem::ZERO);
        p.set(i, i + 1, Elem::ONE);
        p.set(i + 1, i, Elem::ONE);
        seeds.push(p);
    }
    for block in unitary_2x2(f) {
        for i in 0..n.saturating_sub(1) {
            let mut m = Matrix::identity(n);
            for a in 0..2 {
                for b in 0..2 {
                    m.set(i + a, i + b, block.get(a, b));
                }
            }
            seeds.push(m);
        }
    }
    seeds
}

/// Unitary reflections I + ((λ−1)/h(v,v))·v·ᵀv̄J for anisotropic v and
/// transvections I + c·v·ᵀv̄J for isotropic v with c + c̄ = 0.
fn reflection_seeds<'a>(f: &'a Fq2, form: &'a HermitianForm) -> impl Iterator<Item = Matrix> + 'a {
    let n = form.dim();
    let order = f.order();
    let units: Vec<Elem> = f
        .nonzero()
        .filter(|&a| f.norm(a) == Elem::ONE && a != Elem::ONE)
        .collect();
    let skew: Vec<Elem> = f
        .nonzero()
        .filter(|&c| f.add(c, f.conj(c)).is_zero())
        .collect();
    (1..order.pow(n as u32)).flat_map(move |mut idx| {
        let v: Vec<Elem> = (0..n)
            .map(|_| {
                let e = Elem((idx % order) as u16);
                idx /= order;
                e
            })
            .collect();
        // row vector ᵀv̄ J
        let vbar: Vec<Elem> = v.iter().map(|&a| f.conj(a)).collect();
        let row = form.gram().transpose().mul_vec(f, &vbar);
        let outer = |c: Elem| {
            let mut m = Matrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, f.add(m.get(i, j), f.mul(c, f.mul(v[i], row[j]))));
                }
            }
            m
        };
        let a = form.pair(f, &v, &v);
        let coeffs: Vec<Elem> = if a.is_zero() {
            skew.clone()
        } else {
            let inv = f.inv(a).expect("nonzero");
            units
                .iter()
                .map(|&l| f.mul(f.sub(l, Elem::ONE), inv))
                .collect()
        };
        coeffs
            .into_iter()
            .map(outer)
            .filter(|m| form.preserves(f, m))
            .collect::<Vec<_>>()
    })
}

/// Materialize U(n, q) for the given form.
pub fn enumerate_group(
    f: &Fq2,
    form: &HermitianForm,
    strategy: Strategy,
    bounds: GroupBounds,
) -> Result<GroupEnumeration> {
    let n = form.dim();
    let q = f.prime_power().q();
    let expected = unitary_group_order(n, q);
    let candidates = (f.order() as u128)
        .checked_pow((n * n) as u32)
        .unwrap_or(u128::MAX);
    let strategy = match strategy {
        Strategy::Auto if candidates <= bounds.auto_entrywise => Strategy::Entrywise,
        Strategy::Auto => Strategy::Closure,
        s => s,
    };
    if (n * n) as u32 * Matrix::entry_bits(f) > 128 {
        return Err(too_wide());
    }
    let group = match strategy {
        Strategy::Entrywise => {
            if candidates > bounds.entry_scan {
                return Err(Error::BudgetExceeded(format!(
                    "entrywise scan needs {candidates} candidates, bound {}",
                    bounds.entry_scan
                )));
            }
            let elements = entrywise_scan(f, form.gram());
            GroupEnumeration::from_elements(f, form.clone(), strategy, elements, None)?
        }
        Strategy::Closure | Strategy::Auto => {
            if expected > bounds.closure_order {
                return Err(Error::BudgetExceeded(format!(
                    "closure needs {expected} elements, bound {}",
                    bounds.closure_order
                )));
            }
            let mut seeds = identity_form_seeds(f, n);
            if !form.is_identity() {
                let a = form.orthonormal_basis(f)?;
                let a_inv = inverse(f, &a)?;
                seeds = seeds.iter().map(|s| a.mul(f, s).mul(f, &a_inv)).collect();
            }
            let bits = Matrix::entry_bits(f);
            let mut closure = Closure::new(f, n, bits, bounds.closure_order);
            for s in &seeds {
                if closure.len() as u128 == expected {
                    break;
                }
                closure.absorb(s)?;
            }
            // the block seeds can miss part of the group (U(3, 2) for one);
            // reflections and transvections always finish the job
            if (closure.len() as u128) < expected {
                for s in reflection_seeds(f, form) {
                    if closure.len() as u128 == expected {
                        break;
                    }
                    closure.absorb(&s)?;
                }
            }
            let gens = std::mem::take(&mut closure.gens);
            let elements = std::mem::take(&mut closure.elements);
            GroupEnumeration::from_elements(
                f,
                form.clone(),
                Strategy::Closure,
                elements,
                Some(gens),
            )?
        }
    };
    if group.order() as u128 != expected {
        return Err(Error::OrderMismatch {
            got: group.order() as u128,
            expected,
        });
    }
    Ok(group)
}
