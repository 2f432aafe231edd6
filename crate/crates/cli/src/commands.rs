use std::fmt;
use std::io::Write;
use std::ops::ControlFlow;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use strongreal_core::classdata::{
    ClassDatum, DatumWire, Partition, SignedPartition, SymplecticClassDatum,
};
use strongreal_core::classify::{sp_strongly_real, strongly_real, Verdict, Witness};
use strongreal_core::enumerate::{
    count_table, for_each_class_datum, series_k, series_r, series_t, ClassFilter,
    DEFAULT_CLASS_BOUND,
};
use strongreal_core::oracle::group::{GroupBounds, HermitianForm, Strategy};
use strongreal_core::oracle::matrix::Matrix;
use strongreal_core::oracle::realize::realize_class;
use strongreal_core::oracle::reconcile::{
    reconcile, OracleReport, ReconcileOptions, ReconcilePath,
};
use strongreal_core::oracle::reversing::DEFAULT_BUDGET;
use strongreal_core::{Error, Fq2, UnitaryCtx};

use crate::{Command, Format, PathArg, StrategyArg, Which};

/// Why a command did not succeed, mapped to the process exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Disagreement(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Disagreement(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Disagreement(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::EnumerationBound(_) => Failure::Budget(e.to_string()),
            Error::CountMismatch { .. } => Failure::Disagreement(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("json: {e}"))
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cmd: &Command, format: Format, timing: bool, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Classify {
            q,
            sp,
            datum,
            unipotent,
        } => classify(*q, *sp, datum.as_deref(), unipotent.as_deref(), format, out),
        Command::Count { q, n_max } => count(*q, *n_max, format, out),
        Command::List { q, n, filter } => list(*q, *n, filter, format, out),
        Command::Series { q, order, which } => series(*q, *order, *which, format, out),
        Command::Realize {
            q,
            datum,
            unipotent,
            form,
            seed,
        } => realize(
            *q,
            datum.as_deref(),
            unipotent.as_deref(),
            form.as_deref(),
            *seed,
            format,
            out,
        ),
        Command::Verify {
            q,
            n,
            budget,
            path,
            strategy,
        } => verify(
            *q,
            *n,
            budget.unwrap_or(DEFAULT_BUDGET),
            *path,
            *strategy,
            timing,
            format,
            out,
        ),
    }
}

fn context(q: u64) -> Result<UnitaryCtx, Failure> {
    Ok(UnitaryCtx::from_q(q)?)
}

fn read_wire(path: &Path) -> Result<DatumWire, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_datum(
    ctx: &UnitaryCtx,
    datum: Option<&Path>,
    unipotent: Option<&str>,
) -> Result<ClassDatum, Failure> {
    match (datum, unipotent) {
        (Some(path), _) => Ok(ClassDatum::from_wire(ctx, &read_wire(path)?)?),
        (None, Some(spec)) => Ok(ClassDatum::unipotent(ctx, Partition::parse(spec)?)?),
        (None, None) => Err(Failure::Usage(
            "one of --datum or --unipotent is required".into(),
        )),
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::OddMultiplicity {
            at,
            part,
            multiplicity,
        } => {
            format!("part {part} at {at} has odd multiplicity {multiplicity}")
        }
        Witness::Unbalanced { poly } => {
            format!("partition at {poly} differs from its tilde partner")
        }
        Witness::OddEvenGap {
            smallest_odd,
            largest_even,
            odd_parts,
        } => format!(
            "{odd_parts} odd parts, smallest odd {smallest_odd}, largest even {largest_even}"
        ),
    }
}

fn write_verdict(v: &Verdict, format: Format, out: &mut dyn Write) -> Outcome {
    let status = serde_json::to_value(v.status)?;
    let status = status.as_str().unwrap_or_default();
    let rule = v.rule.map(|r| r.tag()).unwrap_or("");
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(v)?)?,
        Format::Csv => {
            writeln!(out, "status,rule,witness")?;
            let w = v.witness.as_ref().map(witness_text).unwrap_or_default();
            writeln!(out, "{status},{rule},{}", csv_field(&w))?;
        }
        Format::Plain => {
            let mut line = status.to_string();
            if !rule.is_empty() {
                line.push_str(&format!(" (rule {rule})"));
            }
            if let Some(w) = &v.witness {
                line.push_str(&format!(": {}", witness_text(w)));
            }
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn classify(
    q: u64,
    sp: bool,
    datum: Option<&Path>,
    unipotent: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let ctx = context(q)?;
    let verdict = if sp {
        let d = match (datum, unipotent) {
            (Some(path), _) => SymplecticClassDatum::from_wire(&ctx, &read_wire(path)?)?,
            (None, Some(spec)) => {
                let plus = SignedPartition::all_plus(Partition::parse(spec)?)?;
                SymplecticClassDatum::from_signed(&ctx, plus, SignedPartition::default())?
            }
            (None, None) => {
                return Err(Failure::Usage(
                    "one of --datum or --unipotent is required".into(),
                ))
            }
        };
        sp_strongly_real(&d)
    } else {
        strongly_real(&ctx, &load_datum(&ctx, datum, unipotent)?)?
    };
    write_verdict(&verdict, format, out)
}

fn count(q: u64, n_max: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let ctx = context(q)?;
    let rows: Vec<_> = count_table(&ctx, n_max)?
        .into_iter()
        .filter(|r| r.n >= 1)
        .collect();
    match format {
        Format::Json => {
            let value: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "K": r.k_series, "K_direct": r.k_direct,
                        "R": r.r_series, "R_direct": r.r_direct,
                        "T": r.t_series, "T_direct": r.t_direct,
                        "agrees": r.agrees(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        }
        Format::Csv => {
            writeln!(out, "n,K,K_direct,R,R_direct,T,T_direct,agrees")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    r.k_series,
                    r.k_direct,
                    r.r_series,
                    r.r_direct,
                    r.t_series,
                    r.t_direct,
                    r.agrees()
                )?;
            }
        }
        Format::Plain => {
            writeln!(
                out,
                "{:>3} {:>12} {:>12} {:>12}  agrees",
                "n", "K", "R", "T"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>3} {:>12} {:>12} {:>12}  {}",
                    r.n,
                    r.k_series,
                    r.r_series,
                    r.t_series,
                    r.agrees()
                )?;
            }
        }
    }
    match rows.iter().find(|r| !r.agrees()) {
        Some(r) => Err(Failure::Disagreement(format!(
            "series and direct counts differ at n = {}",
            r.n
        ))),
        None => Ok(()),
    }
}

fn list(q: u64, n: usize, filter: &str, format: Format, out: &mut dyn Write) -> Outcome {
    let ctx = context(q)?;
    let filter: ClassFilter = filter.parse()?;
    if format == Format::Csv {
        writeln!(out, "label,real,status,rule")?;
    }
    let mut failure: Option<Failure> = None;
    for_each_class_datum(&ctx, n, filter, DEFAULT_CLASS_BOUND, |d| {
        let line = (|| -> Outcome {
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&d.to_wire(&ctx))?)?,
                Format::Plain => writeln!(out, "{}", d.display(&ctx))?,
                Format::Csv => {
                    let v = strongly_real(&ctx, &d)?;
                    let status = serde_json::to_value(v.status)?;
                    writeln!(
                        out,
                        "{},{},{},{}",
                        csv_field(&d.display(&ctx)),
                        d.is_real(&ctx)?,
                        status.as_str().unwrap_or_default(),
                        v.rule.map(|r| r.tag()).unwrap_or("")
                    )?;
                }
            }
            Ok(())
        })();
        match line {
            Ok(()) => ControlFlow::Continue(()),
            Err(f) => {
                failure = Some(f);
                ControlFlow::Break(())
            }
        }
    })?;
    failure.map_or(Ok(()), Err)
}

fn series(q: u64, order: usize, which: Which, format: Format, out: &mut dyn Write) -> Outcome {
    let ctx = context(q)?;
    let pp = ctx.prime_power();
    let s = match which {
        Which::K => series_k(pp, order),
        Which::R => series_r(pp, order)?,
        Which::T => series_t(pp, order)?,
    };
    match format {
        Format::Json => writeln!(out, "{}", s.to_json_array())?,
        Format::Csv => {
            writeln!(out, "n,coefficient")?;
            for (i, c) in s.coeffs().iter().enumerate() {
                writeln!(out, "{i},{c}")?;
            }
        }
        Format::Plain => {
            let parts: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
            writeln!(out, "{}", parts.join(" "))?;
        }
    }
    Ok(())
}

fn parse_form(f: &Fq2, n: usize, spec: Option<&str>) -> Result<HermitianForm, Failure> {
    match spec {
        None => Ok(HermitianForm::identity(n)),
        Some(s) => {
            let sizes = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Failure::Usage(format!("bad form block {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if sizes.iter().sum::<usize>() != n || sizes.contains(&0) {
                return Err(Failure::Usage(format!(
                    "form blocks {s:?} do not sum to n = {n}"
                )));
            }
            Ok(HermitianForm::anti_diagonal_blocks(f, &sizes)?)
        }
    }
}

fn matrix_plain(f: &Fq2, m: &Matrix) -> String {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|&a| {
                    let c: Vec<String> = f.coords(a).iter().map(ToString::to_string).collect();
                    format!("({})", c.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn realize(
    q: u64,
    datum: Option<&Path>,
    unipotent: Option<&str>,
    form: Option<&str>,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let ctx = context(q)?;
    let f = ctx.field();
    let d = load_datum(&ctx, datum, unipotent)?;
    let form = parse_form(f, d.n(), form)?;
    let g = realize_class(&ctx, &d, &form, seed)?;
    match format {
        Format::Json => {
            let value = json!({
                "datum": d.to_wire(&ctx),
                "form": form.gram().to_wire(f),
                "matrix": g.to_wire(f),
            });
            writeln!(out, "{}", serde_json::to_string(&value)?)?;
        }
        Format::Csv => {
            writeln!(out, "row,column,entry")?;
            for i in 0..g.rows() {
                for j in 0..g.cols() {
                    let c: Vec<String> = f
                        .coords(g.get(i, j))
                        .iter()
                        .map(ToString::to_string)
                        .collect();
                    writeln!(out, "{i},{j},{}", c.join(" "))?;
                }
            }
        }
        Format::Plain => {
            writeln!(out, "class {}", d.display(&ctx))?;
            writeln!(
                out,
                "form {}\n{}",
                form.name(),
                matrix_plain(f, form.gram())
            )?;
            writeln!(out, "matrix\n{}", matrix_plain(f, &g))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    label: &'a str,
    class_size: Option<usize>,
    is_real: Option<bool>,
    is_strongly_real: Option<bool>,
    agrees: bool,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    q: u64,
    n: usize,
    budget: u128,
    path: PathArg,
    strategy: StrategyArg,
    timing: bool,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let ctx = context(q)?;
    let opts = ReconcileOptions {
        path: match path {
            PathArg::Auto => ReconcilePath::Auto,
            PathArg::Group => ReconcilePath::Group,
            PathArg::Representatives => ReconcilePath::Representatives,
        },
        group_strategy: match strategy {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Entrywise => Strategy::Entrywise,
            StrategyArg::Closure => Strategy::Closure,
        },
        bounds: GroupBounds::default(),
        budget,
    };
    let start = Instant::now();
    let mut report: OracleReport = reconcile(&ctx, n, &opts)?;
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    match format {
        Format::Json => writeln!(out, "{}", report.to_json()?)?,
        Format::Csv => {
            writeln!(
                out,
                "label,class_size,is_real,is_strongly_real,status,rule,agrees"
            )?;
            for r in &report.records {
                let rec = CsvRecord {
                    label: &r.label,
                    class_size: r.class_size,
                    is_real: r.is_real,
                    is_strongly_real: r.is_strongly_real,
                    agrees: r.agrees,
                };
                let opt = |b: Option<bool>| b.map_or_else(String::new, |b| b.to_string());
                let status = serde_json::to_value(r.verdict.status)?;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    csv_field(rec.label),
                    rec.class_size.map_or_else(String::new, |s| s.to_string()),
                    opt(rec.is_real),
                    opt(rec.is_strongly_real),
                    status.as_str().unwrap_or_default(),
                    r.verdict.rule.map(|x| x.tag()).unwrap_or(""),
                    rec.agrees
                )?;
            }
        }
        Format::Plain => {
            writeln!(
                out,
                "U({n}, {q}) via {}: {} of {} classes, {} disagreements, {} over budget",
                report.strategy,
                report.classes_found,
                report.classes_expected,
                report.disagreements,
                report.budget_exhausted
            )?;
            if let Some(ms) = report.elapsed_ms {
                writeln!(out, "elapsed_ms {ms}")?;
            }
            for r in report
                .records
                .iter()
                .filter(|r| !r.agrees || r.note.is_some())
            {
                writeln!(out, "  {}: {}", r.label, r.note.as_deref().unwrap_or(""))?;
            }
        }
    }
    if report.disagreements > 0 {
        return Err(Failure::Disagreement(format!(
            "{} classes disagree with the classifier",
            report.disagreements
        )));
    }
    if report.classes_found != report.classes_expected {
        return Err(Failure::Usage(format!(
            "oracle found {} classes, expected {}",
            report.classes_found, report.classes_expected
        )));
    }
    if report.budget_exhausted > 0 {
        return Err(Failure::Budget(format!(
            "{} classes undecided within budget {budget}",
            report.budget_exhausted
        )));
    }
    Ok(())
}
