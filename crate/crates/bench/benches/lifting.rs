use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use duality_lab::duality::verify_full_faithful;
use duality_lab::logic::{check_derivation, CheckOptions};
use duality_lab::modal::{buffer_fixture, greatest_fixpoint, SimKind};
use duality_lab::relations::{enumerate_lift, lower_lift};
use duality_lab::EnumConfig;
use duality_lab_bench::{patterned_rel, ring};

fn lifting(c: &mut Criterion) {
    let cfg = EnumConfig::default();
    let mut g = c.benchmark_group("enumerate_lower_lift");
    for n in 2..=4 {
        let r = patterned_rel(n, n, 7);
        g.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| {
                enumerate_lift(&lower_lift(black_box(r)), &cfg)
                    .unwrap()
                    .len()
            })
        });
    }
    g.finish();
}

fn fixpoint(c: &mut Criterion) {
    let mut g = c.benchmark_group("greatest_bisimulation");
    for n in [8, 32, 64] {
        let (x, y) = (ring("X", n), ring("Y", n / 2));
        g.bench_with_input(BenchmarkId::new("ring", n), &(x, y), |b, (x, y)| {
            b.iter(|| greatest_fixpoint(SimKind::Bisimulation, black_box(x), black_box(y)).len())
        });
    }
    for n in [3, 6] {
        let f = buffer_fixture(n).unwrap();
        g.bench_with_input(BenchmarkId::new("buffer", n), &f, |b, f| {
            b.iter(|| greatest_fixpoint(SimKind::Bisimulation, &f.x, &f.y).len())
        });
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let cfg = EnumConfig::default();
    let mut g = c.benchmark_group("full_faithful");
    g.sample_size(10);
    for (n, m) in [(1, 2), (2, 2), (3, 3)] {
        g.bench_function(format!("{n}x{m}"), |b| {
            b.iter(|| verify_full_faithful(n, m, &cfg).unwrap().all_pass())
        });
    }
    g.finish();
}

fn derivation(c: &mut Criterion) {
    let f = buffer_fixture(3).unwrap();
    let models = f.models();
    let main = &f.derivations["main"];
    c.bench_function("check_buffer_main_n3", |b| {
        b.iter(|| {
            check_derivation(black_box(main), &models, &f.theory, CheckOptions::default())
                .unwrap()
                .root_true
        })
    });
}

criterion_group!(benches, lifting, fixpoint, census, derivation);
criterion_main!(benches);
