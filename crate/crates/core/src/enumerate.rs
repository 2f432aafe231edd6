//! Counting conjugacy classes of U(n, q): generating series and direct
//! enumeration of class data, with a cross-check between the two.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classdata::{ClassDatum, Partition};
use crate::classify::{strongly_real, Status};
use crate::error::{Error, Result};
use crate::field_tower::PrimePower;
use crate::upoly::{count_self_conjugate, UIrreducible, UnitaryCtx};

/// Refuse direct enumerations predicted to exceed this many classes.
pub const DEFAULT_CLASS_BOUND: u64 = 2_000_000;

/// A power series truncated after z^N, with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

impl Series {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        Series { coeffs }
    }

    /// Pads or truncates to the given order.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        Series { coeffs }
    }

    /// Σ_j c_j z^{step·j}, with c_j supplied by `coef`.
    pub fn lacunary(order: usize, step: usize, coef: impl Fn(usize) -> BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for j in 0..=order / step {
            coeffs[j * step] = coef(j);
        }
        Series { coeffs }
    }

    /// 1 / (1 − a z^k) = Σ_j a^j z^{kj}.
    pub fn geometric(order: usize, a: &BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        let mut pw = BigInt::one();
        for j in 0..=order / k {
            coeffs[j * k] = pw.clone();
            pw *= a;
        }
        Series { coeffs }
    }

    /// 1 + a z^k.
    pub fn binomial(order: usize, a: &BigInt, k: usize) -> Self {
        let mut s = Self::one(order);
        if k <= order {
            s.coeffs[k] += a;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series { coeffs }
    }

    /// Multiplicative inverse; the constant term must be ±1.
    pub fn inverse(&self) -> Option<Series> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return None;
        }
        let n = self.order();
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = c0.clone();
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &inv[k - i];
            }
            inv[k] = -(acc * c0);
        }
        Some(Series { coeffs: inv })
    }

    /// A JSON array of the coefficients, written as plain integers.
    pub fn to_json_array(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(BigInt::to_string).collect();
        format!("[{}]", parts.join(","))
    }
}

fn require_odd(pp: PrimePower) -> Result<()> {
    if pp.is_odd() {
        Ok(())
    } else {
        Err(Error::EnumerationNeedsOddQ)
    }
}

fn product(order: usize, factors: impl Iterator<Item = Series>) -> Series {
    factors.fold(Series::one(order), |acc, f| acc.mul(&f))
}

/// Total class count: ∏_k (1 + z^k) / (1 − q z^k).
pub fn series_k(pp: PrimePower, order: usize) -> Series {
    let q = BigInt::from(pp.q());
    product(
        order,
        (1..=order).flat_map(|k| {
            [
                Series::binomial(order, &BigInt::one(), k),
                Series::geometric(order, &q, k),
            ]
        }),
    )
}

fn count_series(pp: PrimePower, order: usize, restrict_even_index: bool) -> Series {
    product(
        order,
        (1..=order).map(|k| {
            let constant_one = restrict_even_index && k % 2 == 0;
            Series::lacunary(order, k, |j| {
                BigInt::from(count_self_conjugate(j, pp.q(), constant_one))
            })
        }),
    )
}

/// Strongly real class count (q odd), from per-index self-conjugate counts:
/// odd index i admits any self-conjugate u_i, even index only those with
/// constant 1.
pub fn series_t(pp: PrimePower, order: usize) -> Result<Series> {
    require_odd(pp)?;
    Ok(count_series(pp, order, true))
}

/// Real class count (q odd): every u_i is an arbitrary self-conjugate polynomial.
pub fn series_r(pp: PrimePower, order: usize) -> Result<Series> {
    require_odd(pp)?;
    Ok(count_series(pp, order, false))
}

fn closed_form(pp: PrimePower, order: usize, numerator_coeff: &BigInt, odd_only: bool) -> Series {
    let q = BigInt::from(pp.q());
    let mut s = Series::one(order);
    for k in 1..=order {
        if !odd_only || k % 2 == 1 {
            let b = Series::binomial(order, numerator_coeff, k);
            s = s.mul(&b).mul(&b);
        }
        if 2 * k <= order {
            s = s.mul(&Series::geometric(order, &q, 2 * k));
        }
    }
    s
}

/// ∏_k (1 + z^{2k−1})² / (1 − q z^{2k}): closed form of [`series_t`].
pub fn series_t_closed(pp: PrimePower, order: usize) -> Result<Series> {
    require_odd(pp)?;
    Ok(closed_form(pp, order, &BigInt::one(), true))
}

/// ∏_k (1 + z^k)² / (1 − q z^{2k}): closed form of [`series_r`].
pub fn series_r_closed(pp: PrimePower, order: usize) -> Result<Series> {
    require_odd(pp)?;
    Ok(closed_form(pp, order, &BigInt::one(), false))
}

/// ∏_k (1 + q z^{2k−1})² / (1 − q z^{2k}). Kept for comparison only: its z¹
/// coefficient is 2q, whereas U(1, q) has exactly two strongly real classes.
pub fn series_t_published(pp: PrimePower, order: usize) -> Series {
    closed_form(pp, order, &BigInt::from(pp.q()), true)
}

/// ∏_k (1 + q z^k)² / (1 − q z^{2k}). Kept for comparison only, as above.
pub fn series_r_published(pp: PrimePower, order: usize) -> Series {
    closed_form(pp, order, &BigInt::from(pp.q()), false)
}

/// Which classes to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFilter {
    All,
    Real,
    /// Classes the classifier marks strongly real. For even q, classes with
    /// an unknown verdict are excluded.
    StronglyReal,
}

impl std::str::FromStr for ClassFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ClassFilter::All),
            "real" => Ok(ClassFilter::Real),
            "strongly_real" | "strongly-real" => Ok(ClassFilter::StronglyReal),
            _ => Err(Error::Parameter(format!("unknown filter {s:?}"))),
        }
    }
}

fn keep(ctx: &UnitaryCtx, d: &ClassDatum, filter: ClassFilter) -> Result<bool> {
    Ok(match filter {
        ClassFilter::All => true,
        ClassFilter::Real => d.is_real(ctx)?,
        ClassFilter::StronglyReal => strongly_real(ctx, d)?.status == Status::StronglyReal,
    })
}

/// Calls `visit` on every class datum of U(n, q) passing `filter`, in a fixed
/// order. Stops early when `visit` breaks.
pub fn for_each_class_datum<F>(
    ctx: &UnitaryCtx,
    n: usize,
    filter: ClassFilter,
    bound: u64,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(ClassDatum) -> ControlFlow<()>,
{
    let predicted = series_k(ctx.prime_power(), n)
        .coeff(n)
        .to_u64()
        .unwrap_or(u64::MAX);
    if predicted > bound {
        return Err(Error::EnumerationBound(format!(
            "U({n}, {}) has {predicted} classes, bound {bound}",
            ctx.prime_power().q()
        )));
    }
    let irreducibles = ctx.enumerate_u_irreducibles(n)?;
    let partitions: Vec<Vec<Partition>> = (0..=n as u32).map(Partition::all).collect();

    struct Walk<'a, F> {
        ctx: &'a UnitaryCtx,
        items: &'a [UIrreducible],
        partitions: &'a [Vec<Partition>],
        filter: ClassFilter,
        visit: F,
        chosen: Vec<(UIrreducible, Partition)>,
    }

    impl<F: FnMut(ClassDatum) -> ControlFlow<()>> Walk<'_, F> {
        fn go(&mut self, idx: usize, remaining: usize) -> Result<ControlFlow<()>> {
            if remaining == 0 {
                let d =
                    ClassDatum::from_blocks(self.ctx.prime_power(), self.chosen.iter().cloned())?;
                if keep(self.ctx, &d, self.filter)? {
                    return Ok((self.visit)(d));
                }
                return Ok(ControlFlow::Continue(()));
            }
            for i in idx..self.items.len() {
                let f = &self.items[i];
                let deg = f.degree();
                if deg > remaining {
                    break;
                }
                for size in 1..=remaining / deg {
                    for p in &self.partitions[size] {
                        self.chosen.push((f.clone(), p.clone()));
                        let flow = self.go(i + 1, remaining - deg * size)?;
                        self.chosen.pop();
                        if flow.is_break() {
                            return Ok(flow);
                        }
                    }
                }
            }
            Ok(ControlFlow::Continue(()))
        }
    }

    let mut walk = Walk {
        ctx,
        items: &irreducibles,
        partitions: &partitions,
        filter,
        visit: &mut visit,
        chosen: Vec::new(),
    };
    let _ = walk.go(0, n)?;
    Ok(())
}

/// Every class datum of U(n, q) passing `filter`.
pub fn enumerate_class_data(
    ctx: &UnitaryCtx,
    n: usize,
    filter: ClassFilter,
) -> Result<Vec<ClassDatum>> {
    let mut out = Vec::new();
    for_each_class_datum(ctx, n, filter, DEFAULT_CLASS_BOUND, |d| {
        out.push(d);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Series and direct counts for one n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub k_series: String,
    pub k_direct: u64,
    pub r_series: String,
    pub r_direct: u64,
    pub t_series: String,
    pub t_direct: u64,
}

impl CountRow {
    pub fn agrees(&self) -> bool {
        self.k_series == self.k_direct.to_string()
            && self.r_series == self.r_direct.to_string()
            && self.t_series == self.t_direct.to_string()
    }

    fn first_mismatch(&self) -> Option<Error> {
        [
            ("K", &self.k_series, self.k_direct),
            ("R", &self.r_series, self.r_direct),
            ("T", &self.t_series, self.t_direct),
        ]
        .into_iter()
        .find(|(_, s, d)| **s != d.to_string())
        .map(|(which, s, d)| Error::CountMismatch {
            n: self.n,
            which,
            series: s.clone(),
            direct: d.to_string(),
        })
    }
}

/// Direct counts of all, real and strongly real classes of U(n, q).
pub fn direct_counts(ctx: &UnitaryCtx, n: usize) -> Result<(u64, u64, u64)> {
    let (mut all, mut real, mut strong) = (0u64, 0u64, 0u64);
    let mut err = None;
    for_each_class_datum(ctx, n, ClassFilter::All, DEFAULT_CLASS_BOUND, |d| {
        all += 1;
        match (d.is_real(ctx), strongly_real(ctx, &d)) {
            (Ok(r), Ok(v)) => {
                real += r as u64;
                strong += (v.status == Status::StronglyReal) as u64;
                ControlFlow::Continue(())
            }
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok((all, real, strong)),
    }
}

/// The table of K, R, T per n ≤ `n_max`, from both the series and direct
/// enumeration. Does not fail on disagreement; see [`CountRow::agrees`].
pub fn count_table(ctx: &UnitaryCtx, n_max: usize) -> Result<Vec<CountRow>> {
    let pp = ctx.prime_power();
    let k = series_k(pp, n_max);
    let r = series_r(pp, n_max)?;
    let t = series_t(pp, n_max)?;
    // warm the U-irreducible cache before fanning out
    ctx.enumerate_u_irreducibles(n_max)?;
    let direct: Vec<(u64, u64, u64)> = (0..=n_max)
        .into_par_iter()
        .map(|n| direct_counts(ctx, n))
        .collect::<Result<_>>()?;
    Ok(direct
        .into_iter()
        .enumerate()
        .map(|(n, (kd, rd, td))| CountRow {
            n,
            k_series: k.coeff(n).to_string(),
            k_direct: kd,
            r_series: r.coeff(n).to_string(),
            r_direct: rd,
            t_series: t.coeff(n).to_string(),
            t_direct: td,
        })
        .collect())
}

/// [`count_table`], failing at the first n where the two paths disagree.
pub fn cross_check_counts(ctx: &UnitaryCtx, n_max: usize) -> Result<Vec<CountRow>> {
    let rows = count_table(ctx, n_max)?;
    if let Some(e) = rows.iter().find_map(CountRow::first_mismatch) {
        return Err(e);
    }
    Ok(rows)
}

/// Class data grouped by n, for callers that want all sizes at once.
pub fn enumerate_up_to(
    ctx: &UnitaryCtx,
    n_max: usize,
    filter: ClassFilter,
) -> Result<BTreeMap<usize, Vec<ClassDatum>>> {
    (0..=n_max)
        .map(|n| Ok((n, enumerate_class_data(ctx, n, filter)?)))
        .collect()
}
