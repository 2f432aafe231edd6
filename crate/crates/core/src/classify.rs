//! Strong-reality verdicts from class data.
//!
//! Odd q has a complete criterion. Even q has a sufficient condition and two
//! obstruction patterns; everything between them is reported as unknown.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classdata::{ClassDatum, Partition, SignedPartition, SymplecticClassDatum};
use crate::error::{Error, Result};
use crate::upoly::UnitaryCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    StronglyReal,
    NotStronglyReal,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::StronglyReal => "StronglyReal",
            Status::NotStronglyReal => "NotStronglyReal",
            Status::Unknown => "Unknown",
        })
    }
}

/// Which result produced a verdict. The serialized strings are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Odd q: strongly real iff every (t ± 1)^{2m} has even multiplicity.
    MainThm,
    /// Odd q, types (2^{m2} 1^{m1}) with m2 odd.
    TwoLemma,
    /// Even q sufficient condition.
    Real2,
    /// Even q obstruction: odd number of odd parts, smallest odd exceeds largest even by ≥ 3.
    #[serde(rename = "notstrong2-1")]
    NotStrong2Odd,
    /// Even q obstruction: a single odd part k ≥ 3, largest even part k − 1 of multiplicity one.
    #[serde(rename = "notstrong2-2")]
    NotStrong2Adjacent,
    /// Symplectic obstruction: an even part of odd multiplicity at t ± 1.
    SpCor,
    /// Not real, hence not strongly real.
    #[serde(rename = "reality")]
    Reality,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::MainThm => "MainThm",
            Rule::TwoLemma => "TwoLemma",
            Rule::Real2 => "Real2",
            Rule::NotStrong2Odd => "notstrong2-1",
            Rule::NotStrong2Adjacent => "notstrong2-2",
            Rule::SpCor => "SpCor",
            Rule::Reality => "reality",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Supporting detail for a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An even part with odd multiplicity in the block at `at`.
    OddMultiplicity {
        at: String,
        part: u32,
        multiplicity: u32,
    },
    /// A U-irreducible whose partition differs from that of its tilde.
    Unbalanced { poly: String },
    /// Smallest odd and largest even part (0 when absent) of the unipotent type.
    OddEvenGap {
        smallest_odd: u32,
        largest_even: u32,
        odd_parts: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Option<Rule>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn yes(rule: Rule) -> Self {
        Verdict {
            status: Status::StronglyReal,
            rule: Some(rule),
            witness: None,
        }
    }

    pub fn no(rule: Rule, witness: Option<Witness>) -> Self {
        Verdict {
            status: Status::NotStronglyReal,
            rule: Some(rule),
            witness,
        }
    }

    pub fn unknown() -> Self {
        Verdict {
            status: Status::Unknown,
            rule: None,
            witness: None,
        }
    }

    /// `Some(bool)` for a decided verdict.
    pub fn decided(&self) -> Option<bool> {
        match self.status {
            Status::StronglyReal => Some(true),
            Status::NotStronglyReal => Some(false),
            Status::Unknown => None,
        }
    }
}

/// The smallest even part with odd multiplicity, if any.
pub fn odd_even_part(mu: &Partition) -> Option<(u32, u32)> {
    mu.multiplicities()
        .into_iter()
        .find(|&(p, m)| p % 2 == 0 && m % 2 == 1)
}

fn sign_label(plus: bool) -> String {
    if plus { "t+1" } else { "t-1" }.to_string()
}

/// Whether the class meets an orthogonal subgroup: real, and even parts at
/// t ± 1 occur with even multiplicity. Odd q only.
pub fn orthogonal_embeddable(ctx: &UnitaryCtx, d: &ClassDatum) -> Result<bool> {
    if !ctx.prime_power().is_odd() {
        return Err(Error::RequiresOddQ);
    }
    Ok(d.is_real(ctx)? && odd_q_offender(ctx, d).is_none())
}

fn odd_q_offender(ctx: &UnitaryCtx, d: &ClassDatum) -> Option<Witness> {
    let mut best: Option<(u32, u32, bool)> = None;
    for plus in [false, true] {
        let f = if plus {
            ctx.t_plus_one()
        } else {
            ctx.t_minus_one()
        };
        if let Some((part, mult)) = odd_even_part(&d.partition_of(f.poly())) {
            if best.is_none_or(|(bp, _, _)| part < bp) {
                best = Some((part, mult, plus));
            }
        }
    }
    best.map(|(part, multiplicity, plus)| Witness::OddMultiplicity {
        at: sign_label(plus),
        part,
        multiplicity,
    })
}

/// Parts 2m+1 with m ≥ `min_m` all have even multiplicity.
fn odd_parts_even_from(mu: &Partition, min_m: u32) -> bool {
    mu.multiplicities()
        .into_iter()
        .all(|(p, m)| p % 2 == 0 || p < 2 * min_m + 1 || m % 2 == 0)
}

/// Even-q sufficient condition on the unipotent part.
pub fn real2_holds(mu: &Partition) -> bool {
    odd_parts_even_from(mu, 1) || (mu.multiplicity(1) > 0 && odd_parts_even_from(mu, 2))
}

/// Which even-q obstruction applies to the unipotent part, if either.
pub fn notstrong2_rule(mu: &Partition) -> Option<Rule> {
    let odd: Vec<u32> = mu.parts().iter().copied().filter(|p| p % 2 == 1).collect();
    let largest_even = mu.parts().iter().copied().find(|p| p % 2 == 0).unwrap_or(0);
    if odd.len() % 2 == 1 {
        let smallest_odd = *odd.last().expect("nonempty");
        if smallest_odd >= largest_even + 3 {
            return Some(Rule::NotStrong2Odd);
        }
    }
    if odd.len() == 1 {
        let k = odd[0];
        if k >= 3 && largest_even > 0 && k - largest_even == 1 && mu.multiplicity(largest_even) == 1
        {
            return Some(Rule::NotStrong2Adjacent);
        }
    }
    None
}

/// Verdict for a unipotent type when q is even.
pub fn even_q_unipotent_verdict(mu: &Partition) -> Verdict {
    let yes = real2_holds(mu);
    let no = notstrong2_rule(mu);
    debug_assert!(!(yes && no.is_some()), "even-q rules overlap on {mu}");
    if yes {
        return Verdict::yes(Rule::Real2);
    }
    match no {
        Some(rule) => {
            let odd: Vec<u32> = mu.parts().iter().copied().filter(|p| p % 2 == 1).collect();
            Verdict::no(
                rule,
                Some(Witness::OddEvenGap {
                    smallest_odd: odd.last().copied().unwrap_or(0),
                    largest_even: mu.parts().iter().copied().find(|p| p % 2 == 0).unwrap_or(0),
                    odd_parts: odd.len() as u32,
                }),
            )
        }
        None => Verdict::unknown(),
    }
}

/// Verdict for a unipotent type when q is odd.
pub fn odd_q_unipotent_verdict(mu: &Partition) -> Verdict {
    match odd_even_part(mu) {
        None => Verdict::yes(Rule::MainThm),
        Some((part, multiplicity)) => Verdict::no(
            Rule::MainThm,
            Some(Witness::OddMultiplicity {
                at: sign_label(false),
                part,
                multiplicity,
            }),
        ),
    }
}

/// Decide strong reality of the class labelled `d`.
pub fn strongly_real(ctx: &UnitaryCtx, d: &ClassDatum) -> Result<Verdict> {
    for (f, p) in d.blocks() {
        let t = ctx.tilde(f)?;
        if d.blocks().get(&t) != Some(p) {
            return Ok(Verdict::no(
                Rule::Reality,
                Some(Witness::Unbalanced {
                    poly: f.poly().display(ctx.field()),
                }),
            ));
        }
    }
    if ctx.prime_power().is_odd() {
        return Ok(match odd_q_offender(ctx, d) {
            None => Verdict::yes(Rule::MainThm),
            Some(w) => Verdict::no(Rule::MainThm, Some(w)),
        });
    }
    Ok(even_q_unipotent_verdict(
        &d.partition_of(ctx.t_minus_one().poly()),
    ))
}

/// Whether the class meets a symplectic subgroup: real, and parts 2m+1 with
/// m ≥ 1 at t − 1 occur with even multiplicity. Even q and even n only.
pub fn symplectic_embeddable_even_q(ctx: &UnitaryCtx, d: &ClassDatum) -> Result<bool> {
    if ctx.prime_power().is_odd() {
        return Err(Error::RequiresEvenQ);
    }
    if d.n() % 2 == 1 {
        return Err(Error::InvalidDatum(format!("n = {} is odd", d.n())));
    }
    Ok(d.is_real(ctx)? && odd_parts_even_from(&d.partition_of(ctx.t_minus_one().poly()), 1))
}

/// Subtract 2 from every part ≥ l, dropping zeros.
pub fn reduce_sharp(mu: &Partition, l: u32) -> Result<Partition> {
    if l < 2 || l > mu.largest() || mu.multiplicity(l) == 0 {
        return Err(Error::InvalidReduction {
            l,
            partition: mu.to_string(),
        });
    }
    let parts = mu
        .parts()
        .iter()
        .map(|&p| if p >= l { p - 2 } else { p })
        .filter(|&p| p > 0)
        .collect();
    Partition::new(parts)
}

/// Symplectic strong-reality test (q odd). Only the obstruction direction is
/// available, so the answer is either NotStronglyReal or Unknown.
pub fn sp_strongly_real(d: &SymplecticClassDatum) -> Verdict {
    let at = |sp: &SignedPartition, label: &str| {
        odd_even_part(sp.base()).map(|(part, multiplicity)| Witness::OddMultiplicity {
            at: label.to_string(),
            part,
            multiplicity,
        })
    };
    match at(d.signed_plus(), "t-1").or_else(|| at(d.signed_minus(), "t+1")) {
        Some(w) => Verdict::no(Rule::SpCor, Some(w)),
        None => Verdict::unknown(),
    }
}
