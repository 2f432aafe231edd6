//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use strongreal_core::classdata::{ClassDatum, Partition, SignedPartition, SymplecticClassDatum};
use strongreal_core::classify::{
    notstrong2_rule, odd_q_unipotent_verdict, real2_holds, reduce_sharp, sp_strongly_real,
    strongly_real, Rule, Status,
};
use strongreal_core::enumerate::{
    cross_check_counts, series_r_published, series_t, series_t_published,
};
use strongreal_core::oracle::group::unitary_group_order;
use strongreal_core::oracle::reconcile::{
    is_strongly_real_oracle, reconcile, ReconcileOptions, ReconcilePath,
};
use strongreal_core::oracle::representatives::{
    known_representative, three_one_witness, RepresentativeKind,
};
use strongreal_core::oracle::reversing::{
    all_reversing_involutions, reversing_space, DEFAULT_BUDGET,
};
use strongreal_core::{count_self_conjugate, Elem, Poly, UnitaryCtx};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(q: u64) -> Result<UnitaryCtx, String> {
    UnitaryCtx::from_q(q).map_err(|e| e.to_string())
}

fn part(s: &str) -> Partition {
    Partition::parse(s).expect("literal partition")
}

/// Independent count: every monic polynomial of degree d over GF(q) with
/// nonzero constant term that equals its normalized reciprocal. The
/// constant-one family is counted in even degree only.
fn brute_self_conjugate(c: &UnitaryCtx, d: usize, constant_one_only: bool) -> usize {
    if constant_one_only && d % 2 == 1 {
        return 0;
    }
    let f = c.field();
    let base = f.base_field().to_vec();
    let q = base.len();
    let mut count = 0;
    for idx in 0..q.pow(d as u32) {
        let mut coeffs: Vec<Elem> = (0..d).map(|i| base[(idx / q.pow(i as u32)) % q]).collect();
        coeffs.push(Elem::ONE);
        if coeffs[0].is_zero() || (constant_one_only && coeffs[0] != Elem::ONE) {
            continue;
        }
        let u = Poly::new(coeffs);
        if u.tilde(f).map(|t| t == u).unwrap_or(false) {
            count += 1;
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for q in [3u64, 5] {
        let c = ctx(q)?;
        for d in 1..=4 {
            for one in [false, true] {
                let listed = c
                    .enumerate_self_conjugate(d, one)
                    .map_err(|e| e.to_string())?
                    .len();
                let formula = count_self_conjugate(d, q, one);
                let brute = brute_self_conjugate(&c, d, one);
                ensure(listed as u128 == formula && listed == brute, || {
                    format!("q={q} d={d} const1={one}: listed {listed}, formula {formula}, brute {brute}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (q, degree, constant) cases agree"))
}

fn criterion_2() -> Outcome {
    let mut rows = 0;
    for (q, n_max) in [(3u64, 6usize), (5, 6)] {
        let c = ctx(q)?;
        let table = cross_check_counts(&c, n_max).map_err(|e| e.to_string())?;
        rows += table.iter().filter(|r| r.n >= 1).count();
        let t_at = |n: usize| table.iter().find(|r| r.n == n).map(|r| r.t_direct);
        ensure(t_at(1) == Some(2), || format!("T_1,{q} = {:?}", t_at(1)))?;
        if q == 3 {
            ensure(t_at(2) == Some(4), || format!("T_2,3 = {:?}", t_at(2)))?;
        }
        let t = series_t(c.prime_power(), 2).map_err(|e| e.to_string())?;
        println!(
            "    q={q}: z^1 of T from coefficients {}; displayed closed forms give T {} and R {}",
            t.coeff(1),
            series_t_published(c.prime_power(), 2).coeff(1),
            series_r_published(c.prime_power(), 2).coeff(1)
        );
    }
    Ok(format!("{rows} rows of K, R, T agree (n <= 6)"))
}

fn criterion_3() -> Outcome {
    let mut classes = 0;
    for (n, q, order) in [(1usize, 3u64, 4u64), (2, 3, 96), (2, 5, 720), (3, 3, 24192)] {
        ensure(unitary_group_order(n, q) == order as u128, || {
            format!("order formula U({n},{q})")
        })?;
        let c = ctx(q)?;
        let opts = ReconcileOptions {
            path: ReconcilePath::Group,
            ..Default::default()
        };
        let report = reconcile(&c, n, &opts).map_err(|e| e.to_string())?;
        ensure(report.group_order == Some(order), || {
            format!(
                "U({n},{q}) enumerated {:?} elements, expected {order}",
                report.group_order
            )
        })?;
        ensure(report.is_clean(), || {
            format!(
                "U({n},{q}): {} disagreements, {} exhausted, {} of {} classes",
                report.disagreements,
                report.budget_exhausted,
                report.classes_found,
                report.classes_expected
            )
        })?;
        classes += report.classes_found;
    }
    Ok(format!("0 disagreements over {classes} classes"))
}

fn not_strongly_real_rep(q: u64, kind: RepresentativeKind, dim: usize) -> Result<(), String> {
    let c = ctx(q)?;
    let f = c.field();
    let rep = known_representative(f, kind).map_err(|e| e.to_string())?;
    let space = reversing_space(f, &rep.g).map_err(|e| e.to_string())?.len();
    ensure(space == dim, || {
        format!("{kind:?}: reversing space dimension {space}, expected {dim}")
    })?;
    let oracle = is_strongly_real_oracle(f, &rep.form, &rep.g, None, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let verdict =
        strongly_real(&c, &rep.datum(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(
        oracle == Some(false) && verdict.status == Status::NotStronglyReal,
        || {
            format!(
                "{kind:?}: oracle {oracle:?}, classifier {:?}",
                verdict.status
            )
        },
    )
}

fn criterion_4() -> Outcome {
    not_strongly_real_rep(3, RepresentativeKind::EvenPart { r: 1, m: 0 }, 2)?;
    not_strongly_real_rep(3, RepresentativeKind::EvenPart { r: 1, m: 1 }, 5)?;
    Ok("(2) in U(2,3) and (2,1) in U(3,3) are not strongly real on both sides".into())
}

fn criterion_5() -> Outcome {
    let c = ctx(2)?;
    let f = c.field();
    let cases = [
        (
            RepresentativeKind::ThreeOne,
            6,
            Some(true),
            Status::StronglyReal,
            Rule::Real2,
        ),
        (
            RepresentativeKind::ThreeTwo,
            9,
            Some(false),
            Status::NotStronglyReal,
            Rule::NotStrong2Adjacent,
        ),
        (
            RepresentativeKind::ThreeR { r: 1 },
            3,
            Some(false),
            Status::NotStronglyReal,
            Rule::NotStrong2Odd,
        ),
    ];
    for (kind, dim, expect, status, rule) in cases {
        let rep = known_representative(f, kind).map_err(|e| e.to_string())?;
        let space = reversing_space(f, &rep.g).map_err(|e| e.to_string())?.len();
        ensure(space == dim, || {
            format!("{kind:?}: reversing space dimension {space}, expected {dim}")
        })?;
        let oracle = is_strongly_real_oracle(f, &rep.form, &rep.g, None, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        let verdict = strongly_real(&c, &rep.datum(&c).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(
            oracle == expect && verdict.status == status && verdict.rule == Some(rule),
            || {
                format!(
                    "{kind:?}: oracle {oracle:?}, classifier {:?} {:?}",
                    verdict.status, verdict.rule
                )
            },
        )?;
    }
    Ok("(3,1) yes, (3,2) no, (3) no, matching the classifier rules".into())
}

fn criterion_6() -> Outcome {
    let c = ctx(2)?;
    let f = c.field();
    let rep = known_representative(f, RepresentativeKind::ThreeOne).map_err(|e| e.to_string())?;
    let s = three_one_witness(f).map_err(|e| e.to_string())?;
    let gi = strongreal_core::oracle::linalg::inverse(f, &rep.g).map_err(|e| e.to_string())?;
    ensure(s.mul(f, &s).is_identity(), || "s^2 != 1".into())?;
    ensure(s.mul(f, &rep.g).mul(f, &s) == gi, || "sgs != g^-1".into())?;
    ensure(rep.form.preserves(f, &s), || "s is not unitary".into())?;
    let all = all_reversing_involutions(f, &rep.form, &rep.g, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(all.contains(&s), || {
        format!("explicit s missing from {} witnesses", all.len())
    })?;
    Ok(format!("explicit s is one of {} witnesses", all.len()))
}

fn criterion_7() -> Outcome {
    let mu = part("8^5,6^4,5^2,4,3^2,2^8,1^3");
    let ex2 = reduce_sharp(&mu, 2).map_err(|e| e.to_string())?;
    let ex4 = reduce_sharp(&mu, 4).map_err(|e| e.to_string())?;
    ensure(ex2 == part("6^5,4^4,3^2,2,1^5"), || {
        format!("l=2 gave {ex2}")
    })?;
    ensure(ex4 == part("6^5,4^4,3^4,2^9,1^3"), || {
        format!("l=4 gave {ex4}")
    })?;
    let mut pairs = 0;
    for n in 1..=12 {
        for mu in Partition::all(n) {
            let strong = odd_q_unipotent_verdict(&mu).status == Status::StronglyReal;
            for l in mu.multiplicities().keys().copied().filter(|&l| l >= 2) {
                let sharp = reduce_sharp(&mu, l).map_err(|e| e.to_string())?;
                pairs += 1;
                if strong && !sharp.is_empty() {
                    let s = odd_q_unipotent_verdict(&sharp).status;
                    ensure(s == Status::StronglyReal, || {
                        format!("{mu} strongly real but {sharp} (l={l}) is {s:?}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{pairs} (partition, l) pairs; both worked examples reproduced"
    ))
}

fn criterion_8() -> Outcome {
    let mut scanned = 0;
    for n in 1..=14 {
        for mu in Partition::all(n) {
            scanned += 1;
            ensure(
                !(real2_holds(&mu) && notstrong2_rule(&mu).is_some()),
                || format!("{mu}: both rules fire"),
            )?;
        }
    }
    let c = ctx(2)?;
    let d = ClassDatum::unipotent(&c, part("5,3")).map_err(|e| e.to_string())?;
    let v = strongly_real(&c, &d).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Unknown, || {
        format!("(5,3) gave {:?}", v.status)
    })?;
    Ok(format!(
        "{scanned} partitions, no overlap; (5,3) is Unknown"
    ))
}

fn criterion_9() -> Outcome {
    let c = ctx(3)?;
    let mut data = 0;
    for total in (2..=8u32).step_by(2) {
        for a in (0..=total).step_by(2) {
            let pluses = if a == 0 {
                vec![SignedPartition::default()]
            } else {
                SignedPartition::all(a)
            };
            let minuses = if a == total {
                vec![SignedPartition::default()]
            } else {
                SignedPartition::all(total - a)
            };
            for plus in &pluses {
                for minus in &minuses {
                    let odd_even = |sp: &SignedPartition| {
                        sp.base()
                            .multiplicities()
                            .iter()
                            .any(|(&p, &m)| p % 2 == 0 && m % 2 == 1)
                    };
                    let expected_no = odd_even(plus) || odd_even(minus);
                    let d = SymplecticClassDatum::from_signed(&c, plus.clone(), minus.clone())
                        .map_err(|e| e.to_string())?;
                    let got_no = sp_strongly_real(&d).status == Status::NotStronglyReal;
                    ensure(got_no == expected_no, || {
                        format!("{plus} / {minus}: NotStronglyReal = {got_no}")
                    })?;
                    data += 1;
                }
            }
        }
    }
    let gamma = SignedPartition::new(
        part("5^2,4^2,3^2,2^3,1^4"),
        [
            (4, strongreal_core::classdata::Sign::Minus),
            (2, strongreal_core::classdata::Sign::Plus),
        ]
        .into_iter()
        .collect(),
    )
    .map_err(|e| e.to_string())?;
    let d = SymplecticClassDatum::from_signed(&c, gamma, SignedPartition::default())
        .map_err(|e| e.to_string())?;
    ensure(d.splitting_count() == 4, || {
        format!("splitting count {}", d.splitting_count())
    })?;
    Ok(format!(
        "{data} signed data; splitting count of the example is 4"
    ))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "self-conjugate polynomial counts",
            criterion_1,
            Duration::from_secs(1),
        ),
        (
            "class counts vs series",
            criterion_2,
            Duration::from_secs(30),
        ),
        (
            "odd-q theorem vs full groups",
            criterion_3,
            Duration::from_secs(300),
        ),
        (
            "even-part obstruction representatives",
            criterion_4,
            Duration::from_secs(10),
        ),
        ("even-q propositions", criterion_5, Duration::from_secs(60)),
        (
            "explicit (3,1) witness",
            criterion_6,
            Duration::from_secs(60),
        ),
        ("reduction step", criterion_7, Duration::from_secs(10)),
        (
            "even-q rules are exclusive",
            criterion_8,
            Duration::from_secs(5),
        ),
        (
            "symplectic obstruction",
            criterion_9,
            Duration::from_secs(1),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!(
                "{detail}, but took {elapsed:.2?} (limit {limit:?})"
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
