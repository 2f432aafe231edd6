//! Exact arithmetic in GF(p), GF(q), GF(q²) and GF(q^k).
//!
//! Two representations live here:
//!
//! - [`FieldCtx`] / [`FieldElem`]: a general extension GF(p^{e·k}) with dense
//!   coordinate vectors over GF(p). Used for the host fields GF(q^{2d}) in
//!   which U-irreducible polynomials are located.
//! - [`Fq2`] / [`Elem`]: the quadratic extension GF(q²) with precomputed
//!   addition, multiplication, inverse and conjugation tables. All polynomial
//!   and matrix work in the rest of the crate runs over this field.
//!
//! Every context uses the lexicographically smallest monic irreducible
//! modulus over GF(p) (coefficients compared low degree first), so rebuilding
//! a context always yields the same encoding.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on log2 of a field's order.
pub const DEFAULT_BIT_CAP: u32 = 64;

/// Largest q² for which [`Fq2`] builds full operation tables.
pub const MAX_TABLE_ORDER: u64 = 1024;

/// A prime power q = p^e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PrimePowerWire", into = "PrimePowerWire")]
pub struct PrimePower {
    p: u64,
    e: u32,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct PrimePowerWire {
    p: u64,
    e: u32,
}

impl TryFrom<PrimePowerWire> for PrimePower {
    type Error = Error;
    fn try_from(w: PrimePowerWire) -> Result<Self> {
        PrimePower::new(w.p, w.e)
    }
}

impl From<PrimePower> for PrimePowerWire {
    fn from(pp: PrimePower) -> Self {
        PrimePowerWire { p: pp.p, e: pp.e }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n` (distinct, ascending) by trial division.
pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(Error::CharacteristicTooLarge(p));
        }
        if e == 0 {
            return Err(Error::InvalidPrimePower(format!("{p}^0")));
        }
        let q = p
            .checked_pow(e)
            .ok_or_else(|| Error::InvalidPrimePower(format!("{p}^{e} overflows")))?;
        Ok(PrimePower { p, e, q })
    }

    /// Parses q itself, recovering p and e.
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidPrimePower(q.to_string()));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut rest = q;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidPrimePower(q.to_string()));
        }
        PrimePower::new(p, e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn is_odd(&self) -> bool {
        self.p != 2
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

// ---------------------------------------------------------------------------
// Dense polynomials over GF(p), used to build and test moduli.

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn modp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn gfp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    gfp_rem(prod, m, p)
}

fn gfp_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let lead_inv = modp_inv(m[dm], p);
    while a.len() > dm {
        let top = a.pop().unwrap();
        if top == 0 {
            continue;
        }
        let c = top * lead_inv % p;
        let shift = a.len() - dm;
        for i in 0..dm {
            a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
        }
    }
    if a.is_empty() {
        a.push(0);
    }
    trim(&mut a);
    a
}

fn gfp_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = gfp_rem(a.clone(), &b, p);
        a = b;
        b = r;
    }
    a
}

/// t^(p^j) mod m.
fn frob_power_of_t(m: &[u64], p: u64, j: u32) -> Vec<u64> {
    let mut x = gfp_rem(vec![0, 1], m, p);
    for _ in 0..j {
        // x <- x^p
        let mut r = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                r = gfp_mulmod(&r, &base, m, p);
            }
            base = gfp_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        x = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial over GF(p).
pub(crate) fn is_irreducible_gfp(m: &[u64], p: u64) -> bool {
    let d = (m.len() - 1) as u32;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let t = vec![0u64, 1];
    let x = frob_power_of_t(m, p, d);
    if gfp_rem(t.clone(), m, p) != x {
        return false;
    }
    for r in prime_factors(d as u128) {
        let y = frob_power_of_t(m, p, d / r as u32);
        let mut diff = y;
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = gfp_gcd(m.to_vec(), diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree `d` over GF(p),
/// comparing coefficient vectors low degree first.
pub fn smallest_irreducible(p: u64, d: u32) -> Vec<u64> {
    let d = d as usize;
    // coefficient c_0 is the most significant digit of the scan
    let mut digits = vec![0u64; d];
    if d > 1 {
        // t divides anything with zero constant term
        digits[0] = 1;
    }
    loop {
        let mut m: Vec<u64> = digits.clone();
        m.push(1);
        if is_irreducible_gfp(&m, p) {
            return m;
        }
        // increment with c_{d-1} least significant
        let mut i = d;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "an irreducible of every degree exists");
        }
    }
}

// ---------------------------------------------------------------------------

/// An element of a [`FieldCtx`]: GF(p) coordinates in the power basis of the
/// context's modulus, low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem {
    coords: Vec<u32>,
}

impl FieldElem {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
}

/// The field GF(q^k), q = p^e, as GF(p)[t]/(modulus).
#[derive(Debug)]
pub struct FieldCtx {
    pp: PrimePower,
    k: u32,
    degree: usize,
    modulus: Vec<u64>,
    size: u128,
    primitive: OnceLock<FieldElem>,
}

/// Wire form of a context: `{p, e, k, modulus_coords}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCtxWire {
    pub p: u64,
    pub e: u32,
    pub k: u32,
    pub modulus_coords: Vec<u64>,
}

impl FieldCtx {
    /// Context for GF(q^k) with the default 64-bit size cap.
    pub fn new(pp: PrimePower, k: u32) -> Result<Self> {
        Self::with_bit_cap(pp, k, DEFAULT_BIT_CAP)
    }

    pub fn with_bit_cap(pp: PrimePower, k: u32, cap: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPrimePower("extension degree 0".into()));
        }
        let degree = pp.e * k;
        let too_large = || Error::ExtensionTooLarge {
            p: pp.p,
            degree,
            cap,
        };
        let size = (pp.p as u128).checked_pow(degree).ok_or_else(too_large)?;
        if cap < 128 && size > 1u128 << cap {
            return Err(too_large());
        }
        let modulus = smallest_irreducible(pp.p, degree);
        Ok(FieldCtx {
            pp,
            k,
            degree: degree as usize,
            modulus,
            size,
            primitive: OnceLock::new(),
        })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }
    /// Degree over GF(q).
    pub fn k(&self) -> u32 {
        self.k
    }
    /// Degree over GF(p).
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn size(&self) -> u128 {
        self.size
    }
    /// Monic modulus over GF(p), low degree first (leading 1 included).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn to_wire(&self) -> FieldCtxWire {
        FieldCtxWire {
            p: self.pp.p,
            e: self.pp.e,
            k: self.k,
            modulus_coords: self.modulus.clone(),
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coords: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FieldElem {
        let mut c = vec![0; self.degree];
        c[0] = 1;
        FieldElem { coords: c }
    }

    /// The class of t, i.e. the root of the modulus.
    pub fn generator(&self) -> FieldElem {
        self.from_poly(&[0, 1])
    }

    fn from_poly(&self, c: &[u64]) -> FieldElem {
        let r = gfp_rem(c.to_vec(), &self.modulus, self.pp.p);
        let mut coords = vec![0u32; self.degree];
        for (i, &x) in r.iter().enumerate() {
            coords[i] = x as u32;
        }
        FieldElem { coords }
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        if coords.len() != self.degree || coords.iter().any(|&c| c as u64 >= self.pp.p) {
            return Err(Error::BadElement);
        }
        Ok(FieldElem {
            coords: coords.to_vec(),
        })
    }

    /// Element with integer encoding `idx` = Σ c_i p^i.
    pub fn from_index(&self, mut idx: u128) -> FieldElem {
        let p = self.pp.p as u128;
        let coords = (0..self.degree)
            .map(|_| {
                let c = (idx % p) as u32;
                idx /= p;
                c
            })
            .collect();
        FieldElem { coords }
    }

    pub fn index(&self, a: &FieldElem) -> u128 {
        let p = self.pp.p as u128;
        a.coords
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.pp.p as u32;
        FieldElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.pp.p as u32;
        FieldElem {
            coords: a.coords.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.pp.p;
        let d = self.degree;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // modulus is monic: reduce top-down
        for top in (d..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..d {
                let sub = c * self.modulus[i] % p;
                prod[top - d + i] = (prod[top - d + i] + p - sub) % p;
            }
        }
        FieldElem {
            coords: prod[..d].iter().map(|&c| c as u32).collect(),
        }
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::Singular);
        }
        Ok(self.pow(a, self.size - 2))
    }

    /// a ↦ a^{q^j}. With j = 1 on GF(q²) this is the bar map.
    pub fn frobenius(&self, a: &FieldElem, power_of_q: u32) -> FieldElem {
        let mut r = a.clone();
        for _ in 0..(power_of_q % self.k) {
            r = self.pow(&r, self.pp.q as u128);
        }
        r
    }

    /// F_U(a) = a^{-q}.
    pub fn u_frobenius(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::FrobeniusAtZero);
        }
        self.inv(&self.pow(a, self.pp.q as u128))
    }

    /// a·ā in a GF(q²) context.
    pub fn norm_to_base(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.k != 2 {
            return Err(Error::NotQuadratic);
        }
        Ok(self.mul(a, &self.frobenius(a, 1)))
    }

    /// First b (in index order) with b·b̄ = c; b = 0 when c = 0.
    pub fn norm_preimage(&self, c: &FieldElem) -> Result<Option<FieldElem>> {
        if self.k != 2 {
            return Err(Error::NotQuadratic);
        }
        if self.is_zero(c) {
            return Ok(Some(self.zero()));
        }
        for i in 1..self.size {
            let b = self.from_index(i);
            if self.norm_to_base(&b)? == *c {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    /// A generator of the multiplicative group, the first in index order.
    pub fn primitive_element(&self) -> &FieldElem {
        self.primitive.get_or_init(|| {
            let n = self.size - 1;
            let factors = prime_factors(n);
            (1..self.size)
                .map(|i| self.from_index(i))
                .find(|g| factors.iter().all(|&r| self.pow(g, n / r) != self.one()))
                .expect("multiplicative group is cyclic")
        })
    }

    /// Embedding of the subfield `sub` into this context, found by locating a
    /// root of `sub`'s modulus among the elements fixed by x ↦ x^{|sub|}.
    pub fn embedding_from(&self, sub: &FieldCtx) -> Result<Embedding> {
        if sub.pp != self.pp || !self.k.is_multiple_of(sub.k) {
            return Err(Error::BadElement);
        }
        if sub.size > 1 << 20 {
            return Err(Error::TableFieldTooLarge(sub.size as u64));
        }
        let eval = |x: &FieldElem| {
            let mut acc = self.zero();
            for &c in sub.modulus.iter().rev() {
                acc = self.mul(&acc, x);
                acc = self.add(&acc, &self.from_index(c as u128));
            }
            acc
        };
        let root = if self.degree == sub.degree {
            self.generator()
        } else {
            let g = self.primitive_element();
            let step = (self.size - 1) / (sub.size - 1);
            let h = self.pow(g, step);
            let mut x = self.one();
            let mut found = None;
            for _ in 0..(sub.size - 1) {
                if self.is_zero(&eval(&x)) {
                    found = Some(x.clone());
                    break;
                }
                x = self.mul(&x, &h);
            }
            found.ok_or(Error::BadElement)?
        };
        let mut images = Vec::with_capacity(sub.size as usize);
        let mut reverse = HashMap::with_capacity(sub.size as usize);
        for idx in 0..sub.size {
            let s = sub.from_index(idx);
            let mut acc = self.zero();
            for &c in s.coords.iter().rev() {
                acc = self.mul(&acc, &root);
                acc = self.add(&acc, &self.from_index(c as u128));
            }
            reverse.insert(acc.coords.clone(), idx as u64);
            images.push(acc);
        }
        Ok(Embedding { images, reverse })
    }
}

/// A fixed field embedding of a small subfield into a larger context.
#[derive(Debug, Clone)]
pub struct Embedding {
    images: Vec<FieldElem>,
    reverse: HashMap<Vec<u32>, u64>,
}

impl Embedding {
    pub fn image(&self, sub_index: u64) -> &FieldElem {
        &self.images[sub_index as usize]
    }
    /// Index in the subfield of a big-field element, if it lies there.
    pub fn preimage(&self, a: &FieldElem) -> Option<u64> {
        self.reverse.get(&a.coords).copied()
    }
}

// ---------------------------------------------------------------------------

/// An element of GF(q²) as its integer encoding Σ c_i p^i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Table-driven GF(q²).
#[derive(Debug)]
pub struct Fq2 {
    ctx: FieldCtx,
    order: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    conj: Vec<u16>,
    base: Vec<Elem>,
    omega: Elem,
}

impl Fq2 {
    pub fn new(pp: PrimePower) -> Result<Self> {
        let ctx = FieldCtx::new(pp, 2)?;
        let order = ctx.size();
        if order > MAX_TABLE_ORDER as u128 {
            return Err(Error::TableFieldTooLarge(order as u64));
        }
        let order = order as usize;
        let elems: Vec<FieldElem> = (0..order).map(|i| ctx.from_index(i as u128)).collect();
        let mut add = vec![0u16; order * order];
        let mut mul = vec![0u16; order * order];
        for i in 0..order {
            for j in i..order {
                let s = ctx.index(&ctx.add(&elems[i], &elems[j])) as u16;
                let m = ctx.index(&ctx.mul(&elems[i], &elems[j])) as u16;
                add[i * order + j] = s;
                add[j * order + i] = s;
                mul[i * order + j] = m;
                mul[j * order + i] = m;
            }
        }
        let neg = elems
            .iter()
            .map(|a| ctx.index(&ctx.neg(a)) as u16)
            .collect();
        let mut inv = vec![0u16; order];
        for i in 1..order {
            let j = (1..order).find(|&j| mul[i * order + j] == 1).unwrap();
            inv[i] = j as u16;
        }
        let conj: Vec<u16> = elems
            .iter()
            .map(|a| ctx.index(&ctx.frobenius(a, 1)) as u16)
            .collect();
        let base: Vec<Elem> = (0..order)
            .filter(|&i| conj[i] as usize == i)
            .map(|i| Elem(i as u16))
            .collect();
        let omega = Elem((0..order).find(|&i| conj[i] as usize != i).unwrap() as u16);
        Ok(Fq2 {
            ctx,
            order,
            add,
            mul,
            neg,
            inv,
            conj,
            base,
            omega,
        })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.ctx.prime_power()
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    /// q².
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as u16).map(Elem)
    }
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.order as u16).map(Elem)
    }
    /// The GF(q) subfield, in index order.
    pub fn base_field(&self) -> &[Elem] {
        &self.base
    }
    /// First element outside GF(q).
    pub fn omega(&self) -> Elem {
        self.omega
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.0 as usize * self.order + b.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.0 as usize * self.order + b.0 as usize])
    }
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (!a.is_zero()).then(|| Elem(self.inv[a.0 as usize]))
    }
    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        Elem(self.conj[a.0 as usize])
    }
    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let mut r = Elem::ONE;
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    pub fn is_base(&self, a: Elem) -> bool {
        self.conj(a) == a
    }
    /// a·ā ∈ GF(q).
    pub fn norm(&self, a: Elem) -> Elem {
        self.mul(a, self.conj(a))
    }
    /// a + ā ∈ GF(q).
    pub fn trace(&self, a: Elem) -> Elem {
        self.add(a, self.conj(a))
    }
    /// F_U(a) = a^{-q}.
    pub fn u_frobenius(&self, a: Elem) -> Result<Elem> {
        self.inv(self.conj(a)).ok_or(Error::FrobeniusAtZero)
    }
    /// First b with b·b̄ = c (b = 0 when c = 0).
    pub fn norm_preimage(&self, c: Elem) -> Option<Elem> {
        if c.is_zero() {
            return Some(Elem::ZERO);
        }
        self.nonzero().find(|&b| self.norm(b) == c)
    }
    /// Integer embedding of GF(p) ⊂ GF(q²).
    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.prime_power().p() as i64;
        Elem(n.rem_euclid(p) as u16)
    }
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        self.ctx.from_index(a.0 as u128).coords
    }
    pub fn from_coords(&self, c: &[u32]) -> Result<Elem> {
        let e = self.ctx.from_coords(c)?;
        Ok(Elem(self.ctx.index(&e) as u16))
    }
    pub fn to_field_elem(&self, a: Elem) -> FieldElem {
        self.ctx.from_index(a.0 as u128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, e: u32) -> PrimePower {
        PrimePower::new(p, e).unwrap()
    }

    /// Irreducibility by absence of factors: brute force over all monic
    /// polynomials of degree ≤ d/2.
    fn brute_irreducible(m: &[u64], p: u64) -> bool {
        let d = m.len() - 1;
        for dd in 1..=d / 2 {
            let count = p.pow(dd as u32);
            for idx in 0..count {
                let mut f: Vec<u64> = (0..dd).map(|i| idx / p.pow(i as u32) % p).collect();
                f.push(1);
                let r = gfp_rem(m.to_vec(), &f, p);
                if r == vec![0] {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_power_validation() {
        assert!(PrimePower::new(4, 1).is_err());
        assert!(PrimePower::new(3, 0).is_err());
        let q9 = PrimePower::from_q(9).unwrap();
        assert_eq!((q9.p(), q9.e(), q9.q()), (3, 2, 9));
        assert!(PrimePower::from_q(12).is_err());
        assert!(PrimePower::new(65537, 1).is_err());
    }

    #[test]
    fn prime_field_modulus_is_t() {
        let c = FieldCtx::new(pp(3, 1), 1).unwrap();
        assert_eq!(c.modulus(), &[0, 1]);
    }

    #[test]
    fn gf9_modulus_is_smallest_irreducible_quadratic() {
        // enumerate all 9 monic quadratics, low-degree-first lexicographic
        let mut irr = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                let m = vec![c0, c1, 1];
                let has_root = (0..3u64).any(|x| (c0 + c1 * x + x * x) % 3 == 0);
                if !has_root {
                    irr.push(m);
                }
            }
        }
        irr.sort();
        let c = FieldCtx::new(pp(3, 1), 2).unwrap();
        assert_eq!(c.modulus(), irr[0].as_slice());
        assert_eq!(c.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf4_modulus() {
        let c = FieldCtx::new(pp(2, 1), 2).unwrap();
        assert_eq!(c.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn rabin_agrees_with_brute_force() {
        for &p in &[2u64, 3, 5] {
            for d in 1..=4u32 {
                let count = p.pow(d);
                for idx in 0..count.min(200) {
                    let mut m: Vec<u64> = (0..d).map(|i| idx / p.pow(i) % p).collect();
                    m.push(1);
                    assert_eq!(
                        is_irreducible_gfp(&m, p),
                        brute_irreducible(&m, p),
                        "p={p} m={m:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn modulus_is_deterministic() {
        let a = FieldCtx::new(pp(5, 1), 6).unwrap();
        let b = FieldCtx::new(pp(5, 1), 6).unwrap();
        assert_eq!(a.to_wire(), b.to_wire());
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            FieldCtx::new(pp(2, 1), 65),
            Err(Error::ExtensionTooLarge { .. })
        ));
        assert!(FieldCtx::new(pp(2, 1), 64).is_ok());
        assert!(FieldCtx::with_bit_cap(pp(3, 1), 4, 6).is_err());
    }

    #[test]
    fn fermat_holds() {
        let c = FieldCtx::new(pp(3, 1), 4).unwrap();
        for i in 0..c.size() {
            let a = c.from_index(i);
            assert_eq!(c.pow(&a, c.size()), a);
        }
    }

    #[test]
    fn frobenius_examples() {
        let c = FieldCtx::new(pp(3, 1), 2).unwrap();
        let g = c.primitive_element().clone();
        assert_eq!(c.frobenius(&g, 1), c.pow(&g, 3));
        for i in 0..9 {
            let a = c.from_index(i);
            assert_eq!(c.frobenius(&c.frobenius(&a, 1), 1), a);
        }
        // GF(3) elements are fixed
        for i in 0..3 {
            let a = c.from_index(i);
            assert_eq!(c.frobenius(&a, 1), a);
        }
    }

    #[test]
    fn u_frobenius_examples() {
        let c = FieldCtx::new(pp(3, 1), 2).unwrap();
        assert_eq!(c.u_frobenius(&c.one()).unwrap(), c.one());
        let m1 = c.neg(&c.one());
        assert_eq!(c.u_frobenius(&m1).unwrap(), m1);
        let g = c.primitive_element().clone();
        // exponent arithmetic: -3 mod 8 = 5
        assert_eq!(c.u_frobenius(&g).unwrap(), c.pow(&g, 5));
        assert_eq!(c.u_frobenius(&c.zero()), Err(Error::FrobeniusAtZero));
        // F_U twice is a -> a^{q^2}
        for i in 1..9 {
            let a = c.from_index(i);
            let twice = c.u_frobenius(&c.u_frobenius(&a).unwrap()).unwrap();
            assert_eq!(twice, c.pow(&a, 9));
        }
    }

    #[test]
    fn norm_examples() {
        let c4 = FieldCtx::new(pp(2, 1), 2).unwrap();
        assert_eq!(c4.norm_to_base(&c4.one()).unwrap(), c4.one());
        for i in 1..4 {
            let a = c4.from_index(i);
            // GF(4)^x has order 3: every element has norm 1
            assert_eq!(c4.norm_to_base(&a).unwrap(), c4.one());
        }
        let c9 = FieldCtx::new(pp(3, 1), 2).unwrap();
        for cidx in 1..3 {
            let target = c9.from_index(cidx);
            let count = (1..9)
                .filter(|&i| c9.norm_to_base(&c9.from_index(i)).unwrap() == target)
                .count();
            assert_eq!(count, 4);
            let b = c9.norm_preimage(&target).unwrap().unwrap();
            assert_eq!(c9.norm_to_base(&b).unwrap(), target);
        }
        assert_eq!(c9.norm_preimage(&c9.zero()).unwrap(), Some(c9.zero()));
        // the norm is fixed by the bar map
        for i in 0..9 {
            let n = c9.norm_to_base(&c9.from_index(i)).unwrap();
            assert_eq!(c9.frobenius(&n, 1), n);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = FieldCtx::new(pp(3, 1), 2).unwrap();
        let big = FieldCtx::new(pp(3, 1), 6).unwrap();
        let emb = big.embedding_from(&small).unwrap();
        for i in 0..9u128 {
            for j in 0..9u128 {
                let a = small.from_index(i);
                let b = small.from_index(j);
                let prod = small.index(&small.mul(&a, &b)) as u64;
                let sum = small.index(&small.add(&a, &b)) as u64;
                let ea = emb.image(i as u64);
                let eb = emb.image(j as u64);
                assert_eq!(&big.mul(ea, eb), emb.image(prod));
                assert_eq!(&big.add(ea, eb), emb.image(sum));
            }
            assert_eq!(emb.preimage(emb.image(i as u64)), Some(i as u64));
        }
    }

    #[test]
    fn fq2_tables_match_context() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let f = Fq2::new(pp(p, e)).unwrap();
            let c = f.ctx();
            assert_eq!(f.base_field().len() as u64, pp(p, e).q());
            for a in f.elements() {
                for b in f.elements() {
                    let fa = f.to_field_elem(a);
                    let fb = f.to_field_elem(b);
                    assert_eq!(f.to_field_elem(f.mul(a, b)), c.mul(&fa, &fb));
                    assert_eq!(f.to_field_elem(f.add(a, b)), c.add(&fa, &fb));
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(
                        f.u_frobenius(a).unwrap(),
                        f.pow(a, (f.order() - 1 - pp(p, e).q() as usize) as u64)
                    );
                }
                assert_eq!(f.conj(f.conj(a)), a);
                assert!(f.is_base(f.norm(a)));
                assert!(f.is_base(f.trace(a)));
            }
        }
    }
}
