//! Cross-checking the classifier against brute force.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classdata::{ClassDatum, DatumWire};
use crate::classify::{strongly_real, Verdict};
use crate::enumerate::{enumerate_class_data, ClassFilter};
use crate::error::{Error, Result};
use crate::field_tower::Fq2;
use crate::upoly::UnitaryCtx;

use super::extract::extract_class_datum;
use super::group::{
    enumerate_group, unitary_group_order, Classes, GroupBounds, GroupEnumeration, HermitianForm,
    Strategy,
};
use super::linalg::inverse;
use super::matrix::Matrix;
use super::realize::realize_class;
use super::reversing::{find_reversing_involution, reversing_space, ReversalSearch};

/// A materialized group with the data needed to answer reality questions.
pub struct GroupOracle {
    pub group: GroupEnumeration,
    pub classes: Classes,
    pub involutions: Vec<usize>,
}

impl GroupOracle {
    pub fn new(f: &Fq2, group: GroupEnumeration) -> Result<Self> {
        let classes = group.conjugacy_classes(f)?;
        let involutions = group.involutions(f);
        Ok(GroupOracle {
            group,
            classes,
            involutions,
        })
    }

    fn class_of(&self, g: &Matrix) -> Result<u32> {
        let i = self.group.index_of(g).ok_or(Error::NotUnitary)?;
        Ok(self.classes.class_of[i])
    }

    /// g is conjugate to g⁻¹.
    pub fn is_real(&self, f: &Fq2, g: &Matrix) -> Result<bool> {
        Ok(self.class_of(g)? == self.class_of(&inverse(f, g)?)?)
    }

    /// Some s with s² = 1 and s g s = g⁻¹.
    pub fn reversing_involution(&self, f: &Fq2, g: &Matrix) -> Result<Option<&Matrix>> {
        let gi = inverse(f, g)?;
        Ok(self
            .involutions
            .iter()
            .map(|&i| &self.group.elements()[i])
            .find(|s| s.mul(f, g).mul(f, s) == gi))
    }
}

/// Strong reality of g by brute force: through the group when one is
/// supplied, otherwise by the reversing-space scan. `None` means the
/// configured budget was too small to decide.
pub fn is_strongly_real_oracle(
    f: &Fq2,
    form: &HermitianForm,
    g: &Matrix,
    group: Option<&GroupOracle>,
    budget: u128,
) -> Result<Option<bool>> {
    if !form.preserves(f, g) {
        return Err(Error::NotUnitary);
    }
    if let Some(oracle) = group {
        if oracle.group.form() == form && oracle.involutions.len() as u128 <= budget {
            return Ok(Some(oracle.reversing_involution(f, g)?.is_some()));
        }
    }
    Ok(find_reversing_involution(f, form, g, budget)?.decided())
}

/// Reality of g by scanning its reversing space for a unitary element.
pub fn is_real_oracle(
    f: &Fq2,
    form: &HermitianForm,
    g: &Matrix,
    budget: u128,
) -> Result<Option<bool>> {
    let basis = reversing_space(f, g)?;
    if basis.is_empty() {
        return Ok(Some(false));
    }
    let size = (f.order() as u128)
        .checked_pow(basis.len() as u32)
        .unwrap_or(u128::MAX);
    if size > budget {
        return Ok(None);
    }
    let order = f.order() as u64;
    let n = g.rows();
    let hit = (0..size as u64).into_par_iter().find_any(|&idx| {
        let mut idx = idx;
        let mut h = Matrix::zero(n, n);
        for b in &basis {
            let c = crate::field_tower::Elem((idx % order) as u16);
            idx /= order;
            if !c.is_zero() {
                h = h.add(f, &b.scale(f, c));
            }
        }
        form.preserves(f, &h)
    });
    Ok(Some(hit.is_some()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconcilePath {
    /// Materialize the group and split it into conjugacy classes.
    Group,
    /// Realize one matrix per enumerated datum and scan reversing spaces.
    Representatives,
    /// Group when its order is within bounds, else representatives.
    Auto,
}

#[derive(Debug, Clone, Copy)]
pub struct ReconcileOptions {
    pub path: ReconcilePath,
    pub group_strategy: Strategy,
    pub bounds: GroupBounds,
    pub budget: u128,
}

impl Default for ReconcileOptions {
    fn default() -> Self {
        ReconcileOptions {
            path: ReconcilePath::Auto,
            group_strategy: Strategy::Auto,
            bounds: GroupBounds::default(),
            budget: super::reversing::DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub datum: DatumWire,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_size: Option<usize>,
    pub is_real: Option<bool>,
    pub is_strongly_real: Option<bool>,
    pub verdict: Verdict,
    /// False only when a decided oracle answer contradicts the classifier.
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub q: u64,
    pub strategy: String,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<u64>,
    pub classes_found: usize,
    pub classes_expected: usize,
    pub records: Vec<OracleRecord>,
    pub disagreements: usize,
    pub budget_exhausted: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl OracleReport {
    /// Every class decided and matching the classifier, none missing.
    pub fn is_clean(&self) -> bool {
        self.disagreements == 0
            && self.budget_exhausted == 0
            && self.classes_found == self.classes_expected
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn make_record(
    ctx: &UnitaryCtx,
    datum: &ClassDatum,
    class_size: Option<usize>,
    is_real: Option<bool>,
    is_strongly_real: Option<bool>,
) -> Result<OracleRecord> {
    let verdict = strongly_real(ctx, datum)?;
    let classifier_real = datum.is_real(ctx)?;
    let mut notes = Vec::new();
    let mut agrees = true;
    if let Some(r) = is_real {
        if r != classifier_real {
            agrees = false;
            notes.push(format!(
                "oracle reality {r}, datum reality {classifier_real}"
            ));
        }
    }
    if let (Some(o), Some(c)) = (is_strongly_real, verdict.decided()) {
        if o != c {
            agrees = false;
            notes.push(format!("oracle strong reality {o}, classifier {c}"));
        }
    }
    if is_real.is_none() || is_strongly_real.is_none() {
        notes.push("budget exhausted".into());
    }
    if verdict.decided().is_none() {
        notes.push("classifier undecided".into());
    }
    Ok(OracleRecord {
        datum: datum.to_wire(ctx),
        label: datum.display(ctx),
        class_size,
        is_real,
        is_strongly_real,
        verdict,
        agrees,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}

fn finish(
    ctx: &UnitaryCtx,
    n: usize,
    strategy: String,
    budget: u128,
    group_order: Option<u64>,
    classes_found: usize,
    mut rows: Vec<(ClassDatum, OracleRecord)>,
) -> Result<OracleReport> {
    let expected = enumerate_class_data(ctx, n, ClassFilter::All)?.len();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let records: Vec<OracleRecord> = rows.into_iter().map(|(_, r)| r).collect();
    Ok(OracleReport {
        n,
        q: ctx.prime_power().q(),
        strategy,
        budget: budget.min(u64::MAX as u128) as u64,
        group_order,
        classes_found,
        classes_expected: expected,
        disagreements: records.iter().filter(|r| !r.agrees).count(),
        budget_exhausted: records
            .iter()
            .filter(|r| r.is_real.is_none() || r.is_strongly_real.is_none())
            .count(),
        records,
        elapsed_ms: None,
    })
}

fn reconcile_group(ctx: &UnitaryCtx, n: usize, opts: &ReconcileOptions) -> Result<OracleReport> {
    let f = ctx.field();
    let form = HermitianForm::identity(n);
    let group = enumerate_group(f, &form, opts.group_strategy, opts.bounds)?;
    let strategy = match group.strategy() {
        Strategy::Entrywise => "group_entrywise",
        _ => "group_closure",
    };
    let order = group.order() as u64;
    let oracle = GroupOracle::new(f, group)?;
    let within_budget = oracle.involutions.len() as u128 <= opts.budget;
    let rows: Vec<(ClassDatum, OracleRecord)> = oracle
        .classes
        .representatives
        .par_iter()
        .zip(oracle.classes.sizes.par_iter())
        .map(|(&idx, &size)| {
            let g = &oracle.group.elements()[idx];
            let datum = extract_class_datum(ctx, g)?;
            let real = oracle.is_real(f, g)?;
            let strong = if !real {
                Some(false)
            } else if within_budget {
                Some(oracle.reversing_involution(f, g)?.is_some())
            } else {
                None
            };
            let record = make_record(ctx, &datum, Some(size), Some(real), strong)?;
            Ok((datum, record))
        })
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<&ClassDatum> = rows.iter().map(|(d, _)| d).collect();
    if distinct.len() != rows.len() {
        return Err(Error::InvalidDatum(
            "two conjugacy classes share a class datum".into(),
        ));
    }
    let found = rows.len();
    finish(
        ctx,
        n,
        strategy.into(),
        opts.budget,
        Some(order),
        found,
        rows,
    )
}

fn reconcile_representatives(
    ctx: &UnitaryCtx,
    n: usize,
    opts: &ReconcileOptions,
) -> Result<OracleReport> {
    let f = ctx.field();
    let form = HermitianForm::identity(n);
    let data = enumerate_class_data(ctx, n, ClassFilter::All)?;
    let rows: Vec<(ClassDatum, OracleRecord)> = data
        .par_iter()
        .map(|d| {
            let g = realize_class(ctx, d, &form, 0)?;
            let real = is_real_oracle(f, &form, &g, opts.budget)?;
            let strong = match real {
                Some(false) => Some(false),
                _ => match find_reversing_involution(f, &form, &g, opts.budget)? {
                    ReversalSearch::Found(_) => Some(true),
                    ReversalSearch::NotFound => Some(false),
                    ReversalSearch::Exhausted { .. } => None,
                },
            };
            Ok((d.clone(), make_record(ctx, d, None, real, strong)?))
        })
        .collect::<Result<_>>()?;
    let found = rows.len();
    finish(
        ctx,
        n,
        "representatives".into(),
        opts.budget,
        None,
        found,
        rows,
    )
}

/// Runs the oracle on every class of U(n, q) and compares with the classifier.
pub fn reconcile(ctx: &UnitaryCtx, n: usize, opts: &ReconcileOptions) -> Result<OracleReport> {
    if n == 0 {
        return Err(Error::Dimension);
    }
    match opts.path {
        ReconcilePath::Group => reconcile_group(ctx, n, opts),
        ReconcilePath::Representatives => reconcile_representatives(ctx, n, opts),
        ReconcilePath::Auto => {
            let q = ctx.prime_power().q();
            let fits_key = (n * n) as u32 * Matrix::entry_bits(ctx.field()) <= 128;
            if fits_key && unitary_group_order(n, q) <= opts.bounds.closure_order {
                reconcile_group(ctx, n, opts)
            } else {
                reconcile_representatives(ctx, n, opts)
            }
        }
    }
}
