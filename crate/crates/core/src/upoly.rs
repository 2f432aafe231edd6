//! Polynomials over GF(q²) and U-irreducible polynomials.
//!
//! A U-irreducible polynomial is ∏ (t − b) over one orbit of the map
//! F_U: a ↦ a^{-q} on the nonzero elements of the algebraic closure. An orbit
//! of size d satisfies a^{(-q)^d} = a, so it sits inside the cyclic subgroup of
//! GF(q^{2d})^× of order q^d + 1 (d odd) or q^d − 1 (d even). Enumeration
//! scans exactly that subgroup, doing the orbit bookkeeping on exponents of a
//! generator and the field arithmetic only when a polynomial is multiplied
//! out.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_tower::{Elem, FieldCtx, FieldElem, Fq2, PrimePower, DEFAULT_BIT_CAP};

/// Default cap on q^deg for exhaustive self-conjugate polynomial scans.
pub const DEFAULT_SCAN_BOUND: u128 = 10_000_000;

/// A polynomial over GF(q²), coefficients low degree first, without trailing
/// zeros. The zero polynomial has no coefficients.
///
/// Ordering is by degree, then lexicographic on the coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Elem>);

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn one() -> Self {
        Poly(vec![Elem::ONE])
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    /// t − a
    pub fn linear(f: &Fq2, a: Elem) -> Self {
        Poly(vec![f.neg(a), Elem::ONE])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [Elem::ONE]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last() == Some(&Elem::ONE)
    }

    pub fn constant(&self) -> Elem {
        self.0.first().copied().unwrap_or(Elem::ZERO)
    }

    pub fn add(&self, f: &Fq2, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let c = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(Elem::ZERO);
                let b = other.0.get(i).copied().unwrap_or(Elem::ZERO);
                f.add(a, b)
            })
            .collect();
        Poly::new(c)
    }

    pub fn mul(&self, f: &Fq2, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Elem::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, f: &Fq2, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(f, self))
    }

    pub fn scale(&self, f: &Fq2, s: Elem) -> Poly {
        Poly::new(self.0.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Division by a monic divisor.
    pub fn div_rem_monic(&self, f: &Fq2, divisor: &Poly) -> (Poly, Poly) {
        debug_assert!(divisor.is_monic());
        let dd = divisor.degree();
        if self.0.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let mut quot = vec![Elem::ZERO; self.0.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for i in 0..=dd {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, divisor.0[i]));
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Coefficientwise bar map.
    pub fn conj(&self, f: &Fq2) -> Poly {
        Poly(self.0.iter().map(|&c| f.conj(c)).collect())
    }

    /// The monic polynomial whose roots are the inverses of this one's.
    pub fn tilde(&self, f: &Fq2) -> Result<Poly> {
        let c0 = self.constant();
        let inv = f.inv(c0).ok_or(Error::ZeroConstant)?;
        Ok(Poly::new(
            self.0.iter().rev().map(|&c| f.mul(c, inv)).collect(),
        ))
    }

    /// The monic polynomial whose roots are the negatives of this one's:
    /// (−1)^deg · p(−t).
    pub fn negate_roots(&self, f: &Fq2) -> Poly {
        let d = self.degree();
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &c)| if (d - i) % 2 == 1 { f.neg(c) } else { c })
                .collect(),
        )
    }

    pub fn eval(&self, f: &Fq2, x: Elem) -> Elem {
        self.0
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn is_over_base(&self, f: &Fq2) -> bool {
        self.0.iter().all(|&c| f.is_base(c))
    }

    pub fn to_wire(&self, f: &Fq2) -> Vec<Vec<u32>> {
        self.0.iter().map(|&c| f.coords(c)).collect()
    }

    pub fn from_wire(f: &Fq2, w: &[Vec<u32>]) -> Result<Poly> {
        let c = w
            .iter()
            .map(|c| f.from_coords(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(c))
    }

    /// Human-readable form; coefficients outside GF(p) print as `[index]`.
    pub fn display(&self, f: &Fq2) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let p = f.prime_power().p();
        let fmt_coeff = |c: Elem| -> String {
            if (c.0 as u64) < p {
                c.0.to_string()
            } else {
                format!("[{}]", c.0)
            }
        };
        let mut s = String::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            match (i, c == Elem::ONE) {
                (0, _) => s.push_str(&fmt_coeff(c)),
                (1, true) => s.push('t'),
                (1, false) => {
                    let _ = write!(s, "{}t", fmt_coeff(c));
                }
                (_, true) => {
                    let _ = write!(s, "t^{i}");
                }
                (_, false) => {
                    let _ = write!(s, "{}t^{i}", fmt_coeff(c));
                }
            }
        }
        s
    }
}

/// A U-irreducible polynomial together with a root descriptor.
///
/// Equality, hashing and ordering only look at the polynomial.
#[derive(Debug, Clone)]
pub struct UIrreducible {
    poly: Poly,
    host_degree: u32,
    root_index: u128,
}

impl UIrreducible {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
    /// Degree over GF(q²) of the field GF(q^{2d}) holding the recorded root.
    pub fn host_degree(&self) -> u32 {
        self.host_degree
    }
    /// Integer encoding of the recorded root in its host field.
    pub fn root_index(&self) -> u128 {
        self.root_index
    }
}

impl PartialEq for UIrreducible {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}
impl Eq for UIrreducible {}
impl std::hash::Hash for UIrreducible {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.poly.hash(state)
    }
}
impl Ord for UIrreducible {
    fn cmp(&self, other: &Self) -> Ordering {
        self.poly.cmp(&other.poly)
    }
}
impl PartialOrd for UIrreducible {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Borrow<Poly> for UIrreducible {
    fn borrow(&self) -> &Poly {
        &self.poly
    }
}

/// Wire form of a U-irreducible: coefficients plus `{degree, orbit_host_degree}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UIrreducibleWire {
    pub poly: Vec<Vec<u32>>,
    pub degree: usize,
    pub orbit_host_degree: u32,
}

#[derive(Debug)]
struct DegreeTable {
    list: Vec<UIrreducible>,
    index: HashMap<Poly, usize>,
}

/// GF(q²) together with a lazily filled cache of U-irreducible polynomials.
///
/// This is the context object most operations in the crate take.
#[derive(Debug)]
pub struct UnitaryCtx {
    pp: PrimePower,
    field: Fq2,
    bit_cap: u32,
    cache: Mutex<BTreeMap<usize, Arc<DegreeTable>>>,
}

impl UnitaryCtx {
    pub fn new(pp: PrimePower) -> Result<Self> {
        Self::with_bit_cap(pp, DEFAULT_BIT_CAP)
    }

    pub fn with_bit_cap(pp: PrimePower, bit_cap: u32) -> Result<Self> {
        Ok(UnitaryCtx {
            pp,
            field: Fq2::new(pp)?,
            bit_cap,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn from_q(q: u64) -> Result<Self> {
        Self::new(PrimePower::from_q(q)?)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn field(&self) -> &Fq2 {
        &self.field
    }

    fn table(&self, d: usize) -> Result<Arc<DegreeTable>> {
        if let Some(t) = self.cache.lock().unwrap().get(&d) {
            return Ok(t.clone());
        }
        let list = u_irreducibles_of_degree(self.pp, &self.field, d, self.bit_cap)?;
        let index = list
            .iter()
            .enumerate()
            .map(|(i, u)| (u.poly.clone(), i))
            .collect();
        let t = Arc::new(DegreeTable { list, index });
        self.cache.lock().unwrap().insert(d, t.clone());
        Ok(t)
    }

    /// All U-irreducibles of degree exactly `d`, in canonical order.
    pub fn u_irreducibles_of_degree(&self, d: usize) -> Result<Vec<UIrreducible>> {
        Ok(self.table(d)?.list.clone())
    }

    /// Every U-irreducible of degree ≤ `max_total_degree`, ordered by degree
    /// then coefficients.
    pub fn enumerate_u_irreducibles(&self, max_total_degree: usize) -> Result<Vec<UIrreducible>> {
        let mut out = Vec::new();
        for d in 1..=max_total_degree {
            out.extend(self.table(d)?.list.iter().cloned());
        }
        Ok(out)
    }

    /// The U-irreducible with this polynomial, if it is one.
    pub fn lookup(&self, poly: &Poly) -> Result<Option<UIrreducible>> {
        if poly.degree() == 0 || !poly.is_monic() {
            return Ok(None);
        }
        let t = self.table(poly.degree())?;
        Ok(t.index.get(poly).map(|&i| t.list[i].clone()))
    }

    fn degree_one(&self, root: Elem) -> UIrreducible {
        let p = Poly::linear(&self.field, root);
        self.lookup(&p)
            .expect("degree-1 table always fits")
            .expect("±1 are F_U-fixed")
    }

    /// t − 1
    pub fn t_minus_one(&self) -> UIrreducible {
        self.degree_one(Elem::ONE)
    }

    /// t + 1 (equal to t − 1 in characteristic 2)
    pub fn t_plus_one(&self) -> UIrreducible {
        self.degree_one(self.field.neg(Elem::ONE))
    }

    pub fn is_t_pm_one(&self, f: &UIrreducible) -> bool {
        f.degree() == 1 && {
            let root = self.field.neg(f.poly.constant());
            root == Elem::ONE || root == self.field.neg(Elem::ONE)
        }
    }

    /// f̃ for a U-irreducible f.
    pub fn tilde(&self, f: &UIrreducible) -> Result<UIrreducible> {
        let t = f.poly.tilde(&self.field)?;
        self.lookup(&t)?.ok_or(Error::NotUIrreducible)
    }

    /// The U-irreducible whose roots are the negatives of f's.
    pub fn negate(&self, f: &UIrreducible) -> Result<UIrreducible> {
        let n = f.poly.negate_roots(&self.field);
        self.lookup(&n)?.ok_or(Error::NotUIrreducible)
    }

    /// Root multiset stable under F_U ⟺ the bar-conjugate equals the tilde.
    pub fn is_u_stable(&self, u: &Poly) -> Result<bool> {
        Ok(u.conj(&self.field) == u.tilde(&self.field)?)
    }

    /// The unique multiset of U-irreducibles whose product is `u`, in
    /// canonical order. Refuses anything that is not such a product.
    pub fn factor_into_u_irreducibles(&self, u: &Poly) -> Result<Vec<(UIrreducible, usize)>> {
        if !u.is_monic() {
            return Err(Error::NotMonic);
        }
        if u.constant().is_zero() {
            return Err(Error::ZeroConstant);
        }
        if !self.is_u_stable(u)? {
            return Err(Error::NotUFactorable);
        }
        let f = &self.field;
        let mut rest = u.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while !rest.is_one() {
            if d > rest.degree() {
                return Err(Error::NotUFactorable);
            }
            let table = self.table(d)?;
            for cand in &table.list {
                if cand.degree() > rest.degree() {
                    break;
                }
                let mut mult = 0;
                loop {
                    let (q, r) = rest.div_rem_monic(f, &cand.poly);
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((cand.clone(), mult));
                }
                if rest.is_one() {
                    break;
                }
            }
            d += 1;
        }
        Ok(out)
    }

    /// tilde on an arbitrary product of U-irreducibles.
    pub fn tilde_poly(&self, u: &Poly) -> Result<Poly> {
        u.tilde(&self.field)
    }

    /// Is `u` (monic, over GF(q)) fixed by tilde?
    pub fn is_self_conjugate(&self, u: &Poly) -> Result<bool> {
        if !u.is_monic() {
            return Err(Error::NotMonic);
        }
        if !u.is_over_base(&self.field) {
            return Err(Error::NotOverBaseField);
        }
        Ok(u.tilde(&self.field)? == *u)
    }

    /// Exhaustive list of monic self-conjugate polynomials over GF(q) of the
    /// given degree with nonzero constant (constant 1 when
    /// `constant_one_only`). Odd degree with `constant_one_only` yields none.
    pub fn enumerate_self_conjugate(
        &self,
        deg: usize,
        constant_one_only: bool,
    ) -> Result<Vec<Poly>> {
        self.enumerate_self_conjugate_bounded(deg, constant_one_only, DEFAULT_SCAN_BOUND)
    }

    pub fn enumerate_self_conjugate_bounded(
        &self,
        deg: usize,
        constant_one_only: bool,
        bound: u128,
    ) -> Result<Vec<Poly>> {
        if deg == 0 {
            return Ok(vec![Poly::one()]);
        }
        if constant_one_only && deg % 2 == 1 {
            return Ok(Vec::new());
        }
        let q = self.pp.q() as u128;
        let total = q.checked_pow(deg as u32).unwrap_or(u128::MAX);
        if total > bound {
            return Err(Error::EnumerationBound(format!(
                "q^{deg} = {total} > {bound}"
            )));
        }
        let f = &self.field;
        let base = f.base_field();
        let mut out = Vec::new();
        let mut digits = vec![0usize; deg];
        loop {
            let mut c: Vec<Elem> = digits.iter().map(|&i| base[i]).collect();
            c.push(Elem::ONE);
            let u = Poly::new(c);
            let const_ok = if constant_one_only {
                u.constant() == Elem::ONE
            } else {
                !u.constant().is_zero()
            };
            if const_ok && u.tilde(f)? == u {
                out.push(u);
            }
            // odometer, c_0 most significant
            let mut i = deg;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < base.len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    pub fn u_irreducible_to_wire(&self, u: &UIrreducible) -> UIrreducibleWire {
        UIrreducibleWire {
            poly: u.poly.to_wire(&self.field),
            degree: u.degree(),
            orbit_host_degree: u.host_degree,
        }
    }
}

/// Number of monic self-conjugate polynomials of degree `deg` over GF(q)
/// with nonzero constant, or with constant 1 when `constant_one_only`.
pub fn count_self_conjugate(deg: usize, q: u64, constant_one_only: bool) -> u128 {
    let q = q as u128;
    if deg == 0 {
        return 1;
    }
    if constant_one_only {
        if deg % 2 == 1 {
            0
        } else {
            q.pow((deg / 2) as u32)
        }
    } else {
        q.pow((deg / 2) as u32) + q.pow(((deg - 1) / 2) as u32)
    }
}

/// Order of the subgroup of GF(q^{2d})^× containing every F_U-orbit of size d.
fn orbit_subgroup_order(q: u128, d: u32) -> u128 {
    if d % 2 == 1 {
        q.pow(d) + 1
    } else {
        q.pow(d) - 1
    }
}

fn u_irreducibles_of_degree(
    pp: PrimePower,
    field: &Fq2,
    d: usize,
    bit_cap: u32,
) -> Result<Vec<UIrreducible>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    let host = FieldCtx::with_bit_cap(pp, 2 * d as u32, bit_cap)
        .map_err(|e| Error::EnumerationBound(format!("degree {d}: {e}")))?;
    let q = pp.q() as u128;
    let m = orbit_subgroup_order(q, d as u32);
    if m > 1 << 26 {
        return Err(Error::EnumerationBound(format!(
            "degree {d} needs a subgroup of order {m}"
        )));
    }
    let n = host.size() - 1;
    let g = host.primitive_element().clone();
    let h = host.pow(&g, n / m);
    let emb = host.embedding_from(field.ctx())?;

    let m_us = m as usize;
    let mut powers: Vec<FieldElem> = Vec::with_capacity(m_us);
    let mut x = host.one();
    for _ in 0..m_us {
        powers.push(x.clone());
        x = host.mul(&x, &h);
    }
    let step = (m - q % m) % m; // exponent multiplier for a ↦ a^{-q}
    let mut seen = vec![false; m_us];
    let mut out = Vec::new();
    for j in 0..m_us {
        if seen[j] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = j;
        while !seen[cur] {
            seen[cur] = true;
            orbit.push(cur);
            cur = ((cur as u128 * step) % m) as usize;
        }
        if orbit.len() != d {
            continue;
        }
        // multiply out ∏ (t − root) in the host field
        let mut coeffs = vec![host.one()];
        for &e in &orbit {
            let r = host.neg(&powers[e]);
            let mut next = vec![host.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = host.add(&next[i + 1], c);
                next[i] = host.add(&next[i], &host.mul(c, &r));
            }
            coeffs = next;
        }
        let small: Vec<Elem> = coeffs
            .iter()
            .map(|c| {
                emb.preimage(c)
                    .map(|i| Elem(i as u16))
                    .expect("coefficients of an F_U-orbit polynomial lie in GF(q^2)")
            })
            .collect();
        out.push(UIrreducible {
            poly: Poly::new(small),
            host_degree: d as u32,
            root_index: host.index(&powers[j]),
        });
    }
    out.sort();
    Ok(out)
}
