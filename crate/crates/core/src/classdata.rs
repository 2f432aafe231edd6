//! Partitions and the partition-valued class labels of U(n, q).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_tower::PrimePower;
use crate::upoly::{Poly, UIrreducible, UnitaryCtx};

/// A weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Build from (part, multiplicity) pairs.
    pub fn from_multiplicities<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Result<Self> {
        let mut parts = Vec::new();
        for (part, mult) in pairs {
            parts.extend(std::iter::repeat_n(part, mult as usize));
        }
        Self::new(parts)
    }

    /// Parses `"5,3,2,2"`, also accepting `part^mult` tokens (`"5^2,3,2^3"`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in s.split([',', ' ']).map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || Error::InvalidPartition(format!("cannot parse {tok:?}"));
            let (part, mult) = match tok.split_once('^') {
                Some((p, m)) => (
                    p.parse::<u32>().map_err(|_| bad())?,
                    m.parse::<u32>().map_err(|_| bad())?,
                ),
                None => (tok.parse::<u32>().map_err(|_| bad())?, 1),
            };
            parts.extend(std::iter::repeat_n(part, mult as usize));
        }
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&p| p == part).count() as u32
    }

    /// Part value → multiplicity, ascending by part.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Σ_{i,j} min(λ_i, λ_j): the dimension of the centralizer of a
    /// nilpotent of this Jordan type.
    pub fn commutant_dimension(&self) -> u64 {
        self.0
            .iter()
            .map(|&a| self.0.iter().map(|&b| a.min(b) as u64).sum::<u64>())
            .sum()
    }

    /// Exponent notation, e.g. `5^2 3 2^3 1^2`.
    pub fn exponent_notation(&self) -> String {
        let m = self.multiplicities();
        m.iter()
            .rev()
            .map(|(&p, &k)| {
                if k == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Every partition of `n`, in reverse lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// The label of a conjugacy class of U(n, q): a partition for each
/// U-irreducible in its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassDatum {
    pp: PrimePower,
    n: usize,
    blocks: BTreeMap<UIrreducible, Partition>,
}

impl ClassDatum {
    /// Validates that no block is empty and computes n.
    pub fn new(pp: PrimePower, blocks: BTreeMap<UIrreducible, Partition>) -> Result<Self> {
        if blocks.values().any(Partition::is_empty) {
            return Err(Error::InvalidDatum(
                "empty partition stored in support".into(),
            ));
        }
        let n = blocks
            .iter()
            .map(|(f, p)| f.degree() * p.size() as usize)
            .sum();
        Ok(ClassDatum { pp, n, blocks })
    }

    /// Builds a datum, dropping empty partitions.
    pub fn from_blocks<I: IntoIterator<Item = (UIrreducible, Partition)>>(
        pp: PrimePower,
        blocks: I,
    ) -> Result<Self> {
        Self::new(
            pp,
            blocks.into_iter().filter(|(_, p)| !p.is_empty()).collect(),
        )
    }

    /// The unipotent class of the given type.
    pub fn unipotent(ctx: &UnitaryCtx, partition: Partition) -> Result<Self> {
        Self::from_blocks(ctx.prime_power(), [(ctx.t_minus_one(), partition)])
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &BTreeMap<UIrreducible, Partition> {
        &self.blocks
    }

    /// μ(f), empty when f is outside the support.
    pub fn partition_of(&self, f: &Poly) -> Partition {
        self.blocks.get(f).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Is every block at t − 1?
    pub fn is_unipotent(&self, ctx: &UnitaryCtx) -> bool {
        self.blocks.keys().all(|f| *f == ctx.t_minus_one())
    }

    /// μ(f) = μ(f̃) throughout.
    pub fn is_real(&self, ctx: &UnitaryCtx) -> Result<bool> {
        for (f, p) in &self.blocks {
            let t = ctx.tilde(f)?;
            if self.blocks.get(&t) != Some(p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Splits a real datum into the t − 1 piece, the t + 1 piece, and one
    /// piece per pair {f, f̃}.
    pub fn star_decompose(&self, ctx: &UnitaryCtx) -> Result<Vec<ClassDatum>> {
        if !self.is_real(ctx)? {
            return Err(Error::NotReal);
        }
        let mut out = Vec::new();
        let minus = ctx.t_minus_one();
        let plus = ctx.t_plus_one();
        for special in [&minus, &plus] {
            if let Some(p) = self.blocks.get(special) {
                let piece = Self::from_blocks(self.pp, [(special.clone(), p.clone())])?;
                if !out.contains(&piece) {
                    out.push(piece);
                }
            }
        }
        for (f, p) in &self.blocks {
            if ctx.is_t_pm_one(f) {
                continue;
            }
            let t = ctx.tilde(f)?;
            if t < *f {
                continue;
            }
            let mut pair = BTreeMap::new();
            pair.insert(f.clone(), p.clone());
            pair.insert(t, p.clone());
            out.push(Self::new(self.pp, pair)?);
        }
        Ok(out)
    }

    /// The class of −g.
    pub fn negate(&self, ctx: &UnitaryCtx) -> Result<ClassDatum> {
        if !self.pp.is_odd() {
            return Err(Error::NegationInCharTwo);
        }
        let mut blocks = BTreeMap::new();
        for (f, p) in &self.blocks {
            blocks.insert(ctx.negate(f)?, p.clone());
        }
        Self::new(self.pp, blocks)
    }

    /// (u_1, …, u_K) with u_i = ∏_f f^{m_i(μ(f))}, K the largest part.
    pub fn u_sequence(&self, ctx: &UnitaryCtx) -> Vec<Poly> {
        let field = ctx.field();
        let k = self
            .blocks
            .values()
            .map(Partition::largest)
            .max()
            .unwrap_or(0);
        (1..=k)
            .map(|i| {
                self.blocks.iter().fold(Poly::one(), |acc, (f, p)| {
                    acc.mul(field, &f.poly().pow(field, p.multiplicity(i) as usize))
                })
            })
            .collect()
    }

    /// Inverse of [`u_sequence`](Self::u_sequence), by factoring each term.
    pub fn from_u_sequence(ctx: &UnitaryCtx, seq: &[Poly]) -> Result<ClassDatum> {
        let mut parts: BTreeMap<UIrreducible, Vec<u32>> = BTreeMap::new();
        for (i, u) in seq.iter().enumerate() {
            if u.is_one() {
                continue;
            }
            for (f, m) in ctx.factor_into_u_irreducibles(u)? {
                parts
                    .entry(f)
                    .or_default()
                    .extend(std::iter::repeat_n(i as u32 + 1, m));
            }
        }
        let blocks = parts
            .into_iter()
            .map(|(f, v)| Ok((f, Partition::new(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_blocks(ctx.prime_power(), blocks)
    }

    /// ∏_f ∏_parts f^part.
    pub fn characteristic_polynomial(&self, ctx: &UnitaryCtx) -> Poly {
        let field = ctx.field();
        self.blocks.iter().fold(Poly::one(), |acc, (f, p)| {
            acc.mul(field, &f.poly().pow(field, p.size() as usize))
        })
    }

    pub fn display(&self, ctx: &UnitaryCtx) -> String {
        if self.blocks.is_empty() {
            return "(empty)".into();
        }
        self.blocks
            .iter()
            .map(|(f, p)| format!("{}:{}", f.poly().display(ctx.field()), p))
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn to_wire(&self, ctx: &UnitaryCtx) -> DatumWire {
        DatumWire {
            q: self.pp,
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|(f, p)| BlockWire {
                    poly: f.poly().to_wire(ctx.field()),
                    partition: p.clone(),
                    signs: None,
                })
                .collect(),
        }
    }

    pub fn from_wire(ctx: &UnitaryCtx, w: &DatumWire) -> Result<ClassDatum> {
        if w.q != ctx.prime_power() {
            return Err(Error::InvalidDatum(format!(
                "datum is over q = {}, context is q = {}",
                w.q.q(),
                ctx.prime_power().q()
            )));
        }
        let mut blocks = BTreeMap::new();
        for b in &w.blocks {
            let poly = Poly::from_wire(ctx.field(), &b.poly)?;
            let f = ctx.lookup(&poly)?.ok_or(Error::NotUIrreducible)?;
            if blocks.insert(f, b.partition.clone()).is_some() {
                return Err(Error::InvalidDatum("repeated polynomial".into()));
            }
        }
        let d = Self::from_blocks(ctx.prime_power(), blocks)?;
        if d.n != w.n {
            return Err(Error::InvalidDatum(format!(
                "degrees sum to {}, declared n = {}",
                d.n, w.n
            )));
        }
        Ok(d)
    }

    pub fn to_json(&self, ctx: &UnitaryCtx) -> String {
        serde_json::to_string(&self.to_wire(ctx)).expect("datum serializes")
    }

    pub fn from_json(ctx: &UnitaryCtx, s: &str) -> Result<ClassDatum> {
        Self::from_wire(ctx, &serde_json::from_str(s)?)
    }
}

/// Groups elementary divisors f^k into a class datum.
pub fn make_class_datum(
    ctx: &UnitaryCtx,
    elementary_divisors: &[(Poly, u32)],
) -> Result<ClassDatum> {
    let mut parts: BTreeMap<UIrreducible, Vec<u32>> = BTreeMap::new();
    for (poly, e) in elementary_divisors {
        if *e == 0 {
            return Err(Error::InvalidDatum("exponent 0".into()));
        }
        let f = ctx.lookup(poly)?.ok_or(Error::NotUIrreducible)?;
        parts.entry(f).or_default().push(*e);
    }
    let blocks = parts
        .into_iter()
        .map(|(f, v)| Ok((f, Partition::new(v)?)))
        .collect::<Result<Vec<_>>>()?;
    ClassDatum::from_blocks(ctx.prime_power(), blocks)
}

/// JSON form of a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWire {
    pub poly: Vec<Vec<u32>>,
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<BTreeMap<String, Sign>>,
}

/// JSON form of a class datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumWire {
    pub q: PrimePower,
    pub n: usize,
    pub blocks: Vec<BlockWire>,
}

// ---------------------------------------------------------------------------
// symplectic labels

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// A partition whose odd parts have even multiplicity, with a sign on each
/// even part value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignedPartition {
    base: Partition,
    signs: BTreeMap<u32, Sign>,
}

impl SignedPartition {
    pub fn new(base: Partition, signs: BTreeMap<u32, Sign>) -> Result<Self> {
        let mult = base.multiplicities();
        for (&part, &m) in &mult {
            if part % 2 == 1 && m % 2 == 1 {
                return Err(Error::InvalidPartition(format!(
                    "odd part {part} has odd multiplicity {m}"
                )));
            }
        }
        let evens: Vec<u32> = mult.keys().copied().filter(|p| p % 2 == 0).collect();
        if signs.keys().copied().collect::<Vec<_>>() != evens {
            return Err(Error::InvalidPartition(
                "signs must cover exactly the even part values".into(),
            ));
        }
        Ok(SignedPartition { base, signs })
    }

    /// Signs every even part value +.
    pub fn all_plus(base: Partition) -> Result<Self> {
        let signs = base
            .multiplicities()
            .keys()
            .filter(|p| *p % 2 == 0)
            .map(|&p| (p, Sign::Plus))
            .collect();
        Self::new(base, signs)
    }

    pub fn base(&self) -> &Partition {
        &self.base
    }

    pub fn signs(&self) -> &BTreeMap<u32, Sign> {
        &self.signs
    }

    /// Number of distinct even part values.
    pub fn even_part_values(&self) -> u32 {
        self.signs.len() as u32
    }

    /// Every signed partition of size `n`.
    pub fn all(n: u32) -> Vec<SignedPartition> {
        let mut out = Vec::new();
        for base in Partition::all(n) {
            let mult = base.multiplicities();
            if mult.iter().any(|(&p, &m)| p % 2 == 1 && m % 2 == 1) {
                continue;
            }
            let evens: Vec<u32> = mult.keys().copied().filter(|p| p % 2 == 0).collect();
            for mask in 0u32..(1 << evens.len()) {
                let signs = evens
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| {
                        (
                            p,
                            if mask >> i & 1 == 0 {
                                Sign::Plus
                            } else {
                                Sign::Minus
                            },
                        )
                    })
                    .collect();
                out.push(SignedPartition {
                    base: base.clone(),
                    signs,
                });
            }
        }
        out
    }

    fn signs_wire(&self) -> BTreeMap<String, Sign> {
        self.signs
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }
}

impl fmt::Display for SignedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mult = self.base.multiplicities();
        let s: Vec<String> = mult
            .iter()
            .rev()
            .map(|(&p, &m)| match self.signs.get(&p) {
                Some(Sign::Plus) => format!("{p}^+{m}"),
                Some(Sign::Minus) => format!("{p}^-{m}"),
                None => format!("{p}^{m}"),
            })
            .collect();
        write!(f, "({})", s.join(","))
    }
}

/// Class label for Sp(2n, q), q odd: signed partitions at t ∓ 1 and ordinary
/// partitions elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticClassDatum {
    pp: PrimePower,
    n2: usize,
    blocks: BTreeMap<UIrreducible, Partition>,
    signed_plus: SignedPartition,
    signed_minus: SignedPartition,
}

impl SymplecticClassDatum {
    /// `signed_plus` sits at t − 1 and `signed_minus` at t + 1.
    pub fn new(
        ctx: &UnitaryCtx,
        blocks: BTreeMap<UIrreducible, Partition>,
        signed_plus: SignedPartition,
        signed_minus: SignedPartition,
    ) -> Result<Self> {
        if !ctx.prime_power().is_odd() {
            return Err(Error::RequiresOddQ);
        }
        for (f, p) in &blocks {
            if ctx.is_t_pm_one(f) {
                return Err(Error::InvalidDatum(
                    "t ± 1 must use signed partitions".into(),
                ));
            }
            if p.is_empty() {
                return Err(Error::InvalidDatum(
                    "empty partition stored in support".into(),
                ));
            }
            if blocks.get(&ctx.tilde(f)?) != Some(p) {
                return Err(Error::InvalidDatum("μ(f) ≠ μ(f̃)".into()));
            }
        }
        let n2 = signed_plus.base.size() as usize
            + signed_minus.base.size() as usize
            + blocks
                .iter()
                .map(|(f, p)| f.degree() * p.size() as usize)
                .sum::<usize>();
        if n2 % 2 == 1 {
            return Err(Error::InvalidDatum(format!("total degree {n2} is odd")));
        }
        Ok(SymplecticClassDatum {
            pp: ctx.prime_power(),
            n2,
            blocks,
            signed_plus,
            signed_minus,
        })
    }

    /// Only t ∓ 1 blocks.
    pub fn from_signed(
        ctx: &UnitaryCtx,
        plus: SignedPartition,
        minus: SignedPartition,
    ) -> Result<Self> {
        Self::new(ctx, BTreeMap::new(), plus, minus)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }
    pub fn total_degree(&self) -> usize {
        self.n2
    }
    pub fn blocks(&self) -> &BTreeMap<UIrreducible, Partition> {
        &self.blocks
    }
    pub fn signed_plus(&self) -> &SignedPartition {
        &self.signed_plus
    }
    pub fn signed_minus(&self) -> &SignedPartition {
        &self.signed_minus
    }

    /// 2^{k1+k2}: how many Sp classes this label's GL class splits into.
    pub fn splitting_count(&self) -> u64 {
        1u64 << (self.signed_plus.even_part_values() + self.signed_minus.even_part_values())
    }

    pub fn to_wire(&self, ctx: &UnitaryCtx) -> DatumWire {
        let mut blocks = Vec::new();
        for (f, sp) in [
            (ctx.t_minus_one(), &self.signed_plus),
            (ctx.t_plus_one(), &self.signed_minus),
        ] {
            if !sp.base.is_empty() {
                blocks.push(BlockWire {
                    poly: f.poly().to_wire(ctx.field()),
                    partition: sp.base.clone(),
                    signs: Some(sp.signs_wire()),
                });
            }
        }
        blocks.extend(self.blocks.iter().map(|(f, p)| BlockWire {
            poly: f.poly().to_wire(ctx.field()),
            partition: p.clone(),
            signs: None,
        }));
        DatumWire {
            q: self.pp,
            n: self.n2,
            blocks,
        }
    }

    pub fn from_wire(ctx: &UnitaryCtx, w: &DatumWire) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        let mut plus = SignedPartition::default();
        let mut minus = SignedPartition::default();
        for b in &w.blocks {
            let poly = Poly::from_wire(ctx.field(), &b.poly)?;
            let f = ctx.lookup(&poly)?.ok_or(Error::NotUIrreducible)?;
            if ctx.is_t_pm_one(&f) {
                let signs = b
                    .signs
                    .clone()
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(k, v)| {
                        k.parse::<u32>()
                            .map(|k| (k, v))
                            .map_err(|_| Error::InvalidPartition(format!("bad sign key {k:?}")))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let sp = SignedPartition::new(b.partition.clone(), signs)?;
                if f == ctx.t_minus_one() {
                    plus = sp;
                } else {
                    minus = sp;
                }
            } else {
                blocks.insert(f, b.partition.clone());
            }
        }
        let d = Self::new(ctx, blocks, plus, minus)?;
        if d.n2 != w.n {
            return Err(Error::InvalidDatum(format!(
                "degrees sum to {}, declared n = {}",
                d.n2, w.n
            )));
        }
        Ok(d)
    }
}

/// 2^{k1+k2} for a symplectic datum.
pub fn sp_splitting_count(d: &SymplecticClassDatum) -> u64 {
    d.splitting_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64) -> UnitaryCtx {
        UnitaryCtx::from_q(q).unwrap()
    }

    fn part(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    /// A degree-1 U-irreducible with f ≠ f̃ over GF(9).
    fn non_self_conjugate(c: &UnitaryCtx) -> UIrreducible {
        c.u_irreducibles_of_degree(1)
            .unwrap()
            .into_iter()
            .find(|u| c.tilde(u).unwrap() != *u)
            .unwrap()
    }

    #[test]
    fn partition_parse_and_display() {
        assert_eq!(part("5,3,2,2").parts(), &[5, 3, 2, 2]);
        assert_eq!(part("2,5,2,3"), part("5,3,2,2"));
        assert_eq!(part("5^2,3,2^3,1^2"), part("5,5,3,2,2,2,1,1"));
        assert_eq!(part(""), Partition::empty());
        assert_eq!(part("5,3,2,2").to_string(), "(5,3,2,2)");
        assert_eq!(part("5^2,3,2^3,1^2").exponent_notation(), "5^2 3 2^3 1^2");
        assert!(Partition::parse("3,0").is_err());
        assert!(Partition::parse("3,x").is_err());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        for p in Partition::all(6) {
            assert_eq!(p.size(), 6);
            let sum: u32 = p.multiplicities().iter().map(|(i, m)| i * m).sum();
            assert_eq!(sum, 6);
        }
    }

    #[test]
    fn commutant_dimension_examples() {
        assert_eq!(part("1,1,1").commutant_dimension(), 9);
        assert_eq!(part("3").commutant_dimension(), 3);
        assert_eq!(part("3,1").commutant_dimension(), 6);
        assert_eq!(part("2,1").commutant_dimension(), 5);
    }

    #[test]
    fn make_datum_from_divisors() {
        let c = ctx(3);
        let f = c.field();
        let tm1 = c.t_minus_one().poly().clone();
        let divs: Vec<(Poly, u32)> = [5, 5, 3, 2, 2, 2, 1, 1]
            .iter()
            .map(|&e| (tm1.clone(), e))
            .collect();
        let d = make_class_datum(&c, &divs).unwrap();
        assert_eq!(d.n(), 21);
        assert_eq!(d.partition_of(&tm1), part("5^2,3,2^3,1^2"));

        let single = make_class_datum(&c, &[(tm1.clone(), 1)]).unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(single.partition_of(&tm1), part("1"));

        let g = non_self_conjugate(&c);
        let gt = c.tilde(&g).unwrap();
        let pair = make_class_datum(&c, &[(g.poly().clone(), 1), (gt.poly().clone(), 1)]).unwrap();
        assert_eq!(pair.blocks().len(), 2);
        assert!(pair.blocks().values().all(|p| *p == part("1")));

        let off = f
            .nonzero()
            .find(|&a| f.norm(a) != crate::field_tower::Elem::ONE)
            .unwrap();
        let bad = Poly::linear(f, off);
        assert_eq!(
            make_class_datum(&c, &[(bad, 1)]),
            Err(Error::NotUIrreducible)
        );
    }

    #[test]
    fn reality_examples() {
        let c = ctx(3);
        let uni = ClassDatum::unipotent(&c, part("3,1")).unwrap();
        assert!(uni.is_real(&c).unwrap());
        let g = non_self_conjugate(&c);
        let gt = c.tilde(&g).unwrap();
        let both =
            ClassDatum::from_blocks(c.prime_power(), [(g.clone(), part("1")), (gt, part("1"))])
                .unwrap();
        assert!(both.is_real(&c).unwrap());
        let one = ClassDatum::from_blocks(c.prime_power(), [(g, part("1"))]).unwrap();
        assert!(!one.is_real(&c).unwrap());
        assert_eq!(one.star_decompose(&c), Err(Error::NotReal));
    }

    #[test]
    fn star_decomposition() {
        let c = ctx(3);
        let g = non_self_conjugate(&c);
        let gt = c.tilde(&g).unwrap();
        let d = ClassDatum::from_blocks(
            c.prime_power(),
            [
                (c.t_minus_one(), part("2")),
                (c.t_plus_one(), part("1,1")),
                (g, part("1")),
                (gt, part("1")),
            ],
        )
        .unwrap();
        let pieces = d.star_decompose(&c).unwrap();
        let degrees: Vec<usize> = pieces.iter().map(ClassDatum::n).collect();
        assert_eq!(degrees, vec![2, 2, 2]);
        assert_eq!(degrees.iter().sum::<usize>(), d.n());
        let uni = ClassDatum::unipotent(&c, part("3,1")).unwrap();
        assert_eq!(uni.star_decompose(&c).unwrap(), vec![uni.clone()]);
        let empty = ClassDatum::from_blocks(c.prime_power(), []).unwrap();
        assert!(empty.star_decompose(&c).unwrap().is_empty());
    }

    #[test]
    fn negation() {
        let c = ctx(3);
        let neg_uni =
            ClassDatum::from_blocks(c.prime_power(), [(c.t_plus_one(), part("3,1"))]).unwrap();
        assert_eq!(
            neg_uni.negate(&c).unwrap(),
            ClassDatum::unipotent(&c, part("3,1")).unwrap()
        );
        let mixed = ClassDatum::from_blocks(
            c.prime_power(),
            [(c.t_minus_one(), part("2")), (c.t_plus_one(), part("1"))],
        )
        .unwrap();
        let swapped = ClassDatum::from_blocks(
            c.prime_power(),
            [(c.t_minus_one(), part("1")), (c.t_plus_one(), part("2"))],
        )
        .unwrap();
        assert_eq!(mixed.negate(&c).unwrap(), swapped);
        assert_eq!(mixed.negate(&c).unwrap().negate(&c).unwrap(), mixed);
        let c2 = ctx(2);
        let d2 = ClassDatum::unipotent(&c2, part("1")).unwrap();
        assert_eq!(d2.negate(&c2), Err(Error::NegationInCharTwo));
    }

    #[test]
    fn u_sequence_examples() {
        let c = ctx(3);
        let f = c.field();
        let tm1 = c.t_minus_one().poly().clone();
        let d = ClassDatum::unipotent(&c, part("3,1")).unwrap();
        assert_eq!(
            d.u_sequence(&c),
            vec![tm1.clone(), Poly::one(), tm1.clone()]
        );
        let d = ClassDatum::unipotent(&c, part("2^3,1^2")).unwrap();
        assert_eq!(d.u_sequence(&c), vec![tm1.pow(f, 2), tm1.pow(f, 3)]);
        for i in [1, 2] {
            assert_eq!(
                d.u_sequence(&c)[i - 1].degree() as u32,
                d.partition_of(&tm1).multiplicity(i as u32)
            );
        }
    }

    #[test]
    fn u_sequence_times_powers_is_char_poly() {
        let c = ctx(3);
        let f = c.field();
        let g = non_self_conjugate(&c);
        let d = ClassDatum::from_blocks(
            c.prime_power(),
            [(c.t_minus_one(), part("2,1")), (g, part("3,3,1"))],
        )
        .unwrap();
        let seq = d.u_sequence(&c);
        let prod = seq
            .iter()
            .enumerate()
            .fold(Poly::one(), |acc, (i, u)| acc.mul(f, &u.pow(f, i + 1)));
        assert_eq!(prod, d.characteristic_polynomial(&c));
        assert_eq!(prod.degree(), d.n());
        assert_eq!(ClassDatum::from_u_sequence(&c, &seq).unwrap(), d);
    }

    #[test]
    fn json_round_trip() {
        let c = ctx(4);
        let g = c.u_irreducibles_of_degree(2).unwrap()[0].clone();
        let d = ClassDatum::from_blocks(
            c.prime_power(),
            [(c.t_minus_one(), part("2,1")), (g, part("1"))],
        )
        .unwrap();
        let s = d.to_json(&c);
        assert!(s.starts_with(r#"{"q":{"p":2,"e":2},"n":5,"blocks":[{"poly":"#));
        assert_eq!(ClassDatum::from_json(&c, &s).unwrap(), d);
        let wrong_n = s.replace(r#""n":5"#, r#""n":6"#);
        assert!(ClassDatum::from_json(&c, &wrong_n).is_err());
    }

    #[test]
    fn datum_rejects_empty_block() {
        let c = ctx(3);
        let mut m = BTreeMap::new();
        m.insert(c.t_minus_one(), Partition::empty());
        assert!(ClassDatum::new(c.prime_power(), m).is_err());
    }

    #[test]
    fn signed_partitions() {
        let gamma = SignedPartition::new(
            part("5^2,4^2,3^2,2^3,1^4"),
            [(4, Sign::Minus), (2, Sign::Plus)].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(gamma.to_string(), "(5^2,4^-2,3^2,2^+3,1^4)");
        let c = ctx(3);
        let d = SymplecticClassDatum::from_signed(&c, gamma, SignedPartition::default()).unwrap();
        assert_eq!(d.total_degree(), 34);
        assert_eq!(sp_splitting_count(&d), 4);

        assert!(SignedPartition::all_plus(part("3")).is_err());
        assert!(SignedPartition::new(part("2"), BTreeMap::new()).is_err());
        let odd_only = SignedPartition::all_plus(part("3,3,1,1")).unwrap();
        let d =
            SymplecticClassDatum::from_signed(&c, odd_only, SignedPartition::default()).unwrap();
        assert_eq!(d.splitting_count(), 1);
        let two = SignedPartition::all_plus(part("2")).unwrap();
        let d = SymplecticClassDatum::from_signed(&c, two.clone(), two).unwrap();
        assert_eq!(d.splitting_count(), 4);
    }

    #[test]
    fn symplectic_datum_rejects_even_q_and_odd_total() {
        let c2 = ctx(2);
        assert_eq!(
            SymplecticClassDatum::from_signed(
                &c2,
                SignedPartition::default(),
                SignedPartition::default()
            ),
            Err(Error::RequiresOddQ)
        );
        let c = ctx(3);
        let g = c
            .u_irreducibles_of_degree(1)
            .unwrap()
            .into_iter()
            .find(|u| !c.is_t_pm_one(u))
            .unwrap();
        let blocks: BTreeMap<_, _> = [(g, part("1"))].into_iter().collect();
        assert!(SymplecticClassDatum::new(
            &c,
            blocks,
            SignedPartition::default(),
            SignedPartition::default()
        )
        .is_err());
    }

    #[test]
    fn signed_partition_enumeration() {
        // size 2: (2)+, (2)-, (1,1)
        assert_eq!(SignedPartition::all(2).len(), 3);
        // size 4: (4)±, (3,1) invalid, (2,2)±, (2,1,1)±, (1^4)
        assert_eq!(SignedPartition::all(4).len(), 7);
        for sp in SignedPartition::all(6) {
            for (p, m) in sp.base().multiplicities() {
                assert!(p % 2 == 0 || m % 2 == 0);
            }
        }
    }

    #[test]
    fn symplectic_json_round_trip() {
        let c = ctx(3);
        let plus =
            SignedPartition::new(part("2,1,1"), [(2, Sign::Minus)].into_iter().collect()).unwrap();
        let minus = SignedPartition::all_plus(part("2")).unwrap();
        let d = SymplecticClassDatum::from_signed(&c, plus, minus).unwrap();
        let w = d.to_wire(&c);
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains(r#""signs":{"2":"-"}"#));
        let back: DatumWire = serde_json::from_str(&s).unwrap();
        assert_eq!(SymplecticClassDatum::from_wire(&c, &back).unwrap(), d);
    }
}
