use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use strongreal_bench::unipotent_element;
use strongreal_core::classdata::{ClassDatum, Partition};
use strongreal_core::classify::strongly_real;
use strongreal_core::enumerate::{count_table, enumerate_class_data, ClassFilter};
use strongreal_core::oracle::group::{enumerate_group, GroupBounds, HermitianForm, Strategy};
use strongreal_core::oracle::reversing::{find_reversing_involution, DEFAULT_BUDGET};
use strongreal_core::UnitaryCtx;

fn classifier(c: &mut Criterion) {
    let ctx = UnitaryCtx::from_q(5).unwrap();
    let parts: Vec<_> = Partition::all(16).into_iter().collect();
    c.bench_function("classify all unipotent types n=16 q=5", |b| {
        b.iter(|| {
            parts
                .iter()
                .filter(|mu| {
                    let d = ClassDatum::unipotent(&ctx, (*mu).clone()).unwrap();
                    strongly_real(&ctx, &d).unwrap().decided() == Some(true)
                })
                .count()
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate class data");
    for (q, n) in [(3u64, 5usize), (2, 6), (5, 4)] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        group.bench_with_input(BenchmarkId::new(format!("q={q}"), n), &n, |b, &n| {
            b.iter(|| {
                enumerate_class_data(&ctx, n, ClassFilter::StronglyReal)
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
    let ctx = UnitaryCtx::from_q(3).unwrap();
    c.bench_function("count table q=3 n<=8", |b| {
        b.iter(|| count_table(&ctx, black_box(8)).unwrap())
    });
}

fn group_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate group");
    group.sample_size(10);
    for (n, q, strategy) in [
        (2usize, 3u64, Strategy::Entrywise),
        (3, 2, Strategy::Closure),
        (3, 3, Strategy::Closure),
    ] {
        let ctx = UnitaryCtx::from_q(q).unwrap();
        let form = HermitianForm::identity(n);
        group.bench_function(format!("U({n},{q}) {strategy:?}"), |b| {
            b.iter(|| {
                enumerate_group(ctx.field(), &form, strategy, GroupBounds::default())
                    .unwrap()
                    .order()
            })
        });
    }
    group.finish();

    let mut group = c.benchmark_group("reversing involution");
    group.sample_size(10);
    for (q, parts) in [(3u64, "2,2"), (2, "3,1"), (3, "3,2,1")] {
        let (ctx, form, g) = unipotent_element(q, parts).unwrap();
        group.bench_function(format!("q={q} ({parts})"), |b| {
            b.iter(|| {
                find_reversing_involution(ctx.field(), &form, &g, DEFAULT_BUDGET)
                    .unwrap()
                    .decided()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, classifier, enumeration, group_oracle);
criterion_main!(benches);
