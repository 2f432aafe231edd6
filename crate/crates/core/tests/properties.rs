use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strongreal_core::classdata::{ClassDatum, Partition};
use strongreal_core::classify::{
    notstrong2_rule, odd_q_unipotent_verdict, real2_holds, reduce_sharp, strongly_real, Status,
};
use strongreal_core::enumerate::{
    enumerate_class_data, series_k, series_r, series_t, ClassFilter, Series,
};
use strongreal_core::oracle::extract::extract_class_datum;
use strongreal_core::oracle::group::{
    enumerate_group, GroupBounds, HermitianForm, Strategy as GroupStrategy,
};
use strongreal_core::oracle::linalg::inverse;
use strongreal_core::oracle::realize::realize_class;
use strongreal_core::oracle::reconcile::{reconcile, ReconcileOptions, ReconcilePath};
use strongreal_core::oracle::reversing::reversing_space;
use strongreal_core::{Elem, Poly, UnitaryCtx};

fn partition_strategy(max_n: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=max_n, 1..=max_n as usize).prop_map(move |mut v| {
        // trim to size ≤ max_n, keeping at least one part
        while v.iter().sum::<u32>() > max_n && v.len() > 1 {
            v.pop();
        }
        let total: u32 = v.iter().sum();
        if total > max_n {
            v = vec![max_n];
        }
        Partition::new(v).expect("positive parts")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tilde_is_an_involution(q in prop::sample::select(vec![2u64, 3, 4, 5]), raw in prop::collection::vec(0usize..64, 1..7)) {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        let f = ctx.field();
        let mut coeffs: Vec<Elem> = raw.iter().map(|&i| Elem((i % f.order()) as u16)).collect();
        if coeffs[0].is_zero() {
            coeffs[0] = Elem::ONE;
        }
        coeffs.push(Elem::ONE);
        let u = Poly::new(coeffs);
        let t = u.tilde(f).unwrap();
        prop_assert!(t.is_monic());
        prop_assert_eq!(t.tilde(f).unwrap(), u);
    }

    #[test]
    fn factoring_inverts_multiplication(q in prop::sample::select(vec![2u64, 3, 5]), picks in prop::collection::vec((0usize..40, 1usize..3), 1..4)) {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        let f = ctx.field();
        let pool = ctx.enumerate_u_irreducibles(3).unwrap();
        let mut expected: BTreeMap<_, usize> = BTreeMap::new();
        for (i, m) in picks {
            *expected.entry(pool[i % pool.len()].clone()).or_default() += m;
        }
        let product = expected.iter().fold(Poly::one(), |acc, (u, &m)| acc.mul(f, &u.poly().pow(f, m)));
        let factored: BTreeMap<_, usize> = ctx.factor_into_u_irreducibles(&product).unwrap().into_iter().collect();
        prop_assert_eq!(factored, expected);
    }

    #[test]
    fn series_ring_laws(a in prop::collection::vec(-50i64..50, 1..8), b in prop::collection::vec(-50i64..50, 1..8), c in prop::collection::vec(-50i64..50, 1..8)) {
        let mk = |v: &[i64]| Series::from_coeffs(v.iter().map(|&x| BigInt::from(x)).collect(), 7);
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn reduction_preserves_strong_reality(mu in partition_strategy(24)) {
        if odd_q_unipotent_verdict(&mu).status == Status::StronglyReal {
            for l in mu.multiplicities().keys().copied().filter(|&l| l >= 2) {
                let sharp = reduce_sharp(&mu, l).unwrap();
                prop_assert_eq!(sharp.size(), mu.size() - 2 * mu.parts().iter().filter(|&&p| p >= l).count() as u32);
                if !sharp.is_empty() {
                    prop_assert_eq!(odd_q_unipotent_verdict(&sharp).status, Status::StronglyReal);
                }
            }
        }
    }

    #[test]
    fn even_q_rules_never_overlap(mu in partition_strategy(30)) {
        prop_assert!(!(real2_holds(&mu) && notstrong2_rule(&mu).is_some()));
    }
}

#[test]
fn strongly_real_counts_bounded_by_real_and_total() {
    for q in [3u64, 5, 7] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        let pp = ctx.prime_power();
        let (k, r, t) = (
            series_k(pp, 12),
            series_r(pp, 12).unwrap(),
            series_t(pp, 12).unwrap(),
        );
        for n in 0..=12 {
            assert!(
                t.coeff(n) <= r.coeff(n) && r.coeff(n) <= k.coeff(n),
                "q={q} n={n}"
            );
        }
    }
}

/// Strong reality read off the u-sequence: every u_i self-conjugate with
/// nonzero constant, and for even i also of even degree with constant 1.
fn u_sequence_criterion(ctx: &UnitaryCtx, d: &ClassDatum) -> bool {
    let f = ctx.field();
    d.u_sequence(ctx).iter().enumerate().all(|(i, u)| {
        let self_conj = u.is_over_base(f) && u.tilde(f).map(|t| t == *u).unwrap_or(false);
        let even_index = (i + 1) % 2 == 0;
        self_conj && (!even_index || (u.degree() % 2 == 0 && u.constant() == Elem::ONE))
    })
}

#[test]
fn u_sequence_rephrasing_matches_classifier() {
    let ctx = UnitaryCtx::from_q(3).unwrap();
    for n in 1..=5 {
        for d in enumerate_class_data(&ctx, n, ClassFilter::All).unwrap() {
            let strong = strongly_real(&ctx, &d).unwrap().status == Status::StronglyReal;
            assert_eq!(
                strong,
                u_sequence_criterion(&ctx, &d),
                "{}",
                d.display(&ctx)
            );
        }
    }
}

#[test]
fn negation_preserves_verdicts() {
    for q in [3u64, 5] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        for n in 1..=4 {
            for d in enumerate_class_data(&ctx, n, ClassFilter::All).unwrap() {
                let neg = d.negate(&ctx).unwrap();
                assert_eq!(neg.negate(&ctx).unwrap(), d);
                assert_eq!(
                    strongly_real(&ctx, &neg).unwrap().status,
                    strongly_real(&ctx, &d).unwrap().status
                );
                assert_eq!(neg.is_real(&ctx).unwrap(), d.is_real(&ctx).unwrap());
            }
        }
    }
}

#[test]
fn extraction_is_conjugation_invariant() {
    for (n, q) in [(2usize, 3u64), (3, 2), (2, 5), (3, 3)] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        let f = ctx.field();
        let group = enumerate_group(
            f,
            &HermitianForm::identity(n),
            GroupStrategy::Auto,
            GroupBounds::default(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 100 + q);
        for _ in 0..200 {
            let g = &group.elements()[rng.gen_range(0..group.order())];
            let h = &group.elements()[rng.gen_range(0..group.order())];
            let conj = h.mul(f, g).mul(f, &inverse(f, h).unwrap());
            assert_eq!(
                extract_class_datum(&ctx, &conj).unwrap(),
                extract_class_datum(&ctx, g).unwrap()
            );
        }
    }
}

#[test]
fn realization_round_trips() {
    for q in [2u64, 3] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        for n in 1..=4 {
            let form = HermitianForm::identity(n);
            for d in enumerate_class_data(&ctx, n, ClassFilter::All).unwrap() {
                let g = realize_class(&ctx, &d, &form, 11).unwrap();
                assert!(form.preserves(ctx.field(), &g));
                assert_eq!(extract_class_datum(&ctx, &g).unwrap(), d);
            }
        }
    }
}

#[test]
fn reversing_space_has_commutant_dimension() {
    for q in [2u64, 3] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        for n in 1..=5u32 {
            let form = HermitianForm::identity(n as usize);
            for mu in Partition::all(n) {
                let d = ClassDatum::unipotent(&ctx, mu.clone()).unwrap();
                let g = realize_class(&ctx, &d, &form, 3).unwrap();
                let dim = reversing_space(ctx.field(), &g).unwrap().len() as u64;
                assert_eq!(dim, mu.commutant_dimension(), "q={q} {mu}");
            }
        }
    }
}

#[test]
fn oracle_matches_odd_q_theorem_and_strong_implies_real() {
    for (n, q) in [(1usize, 3u64), (1, 5), (2, 3), (2, 5), (3, 3)] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        let report = reconcile(
            &ctx,
            n,
            &ReconcileOptions {
                path: ReconcilePath::Group,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.is_clean(), "U({n},{q})");
        for r in &report.records {
            if r.is_strongly_real == Some(true) {
                assert_eq!(r.is_real, Some(true));
            }
            assert_eq!(r.verdict.decided(), r.is_strongly_real);
        }
    }
}

#[test]
fn reconcile_is_independent_of_thread_count() {
    let ctx = UnitaryCtx::from_q(2).unwrap();
    let opts = ReconcileOptions::default();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| reconcile(&ctx, 3, &opts).unwrap().to_json().unwrap())
    };
    assert_eq!(run(1), run(4));
}
