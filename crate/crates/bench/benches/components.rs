use std::hint::black_box;

use bwrk_bench::lp_instance;
use bwrk_core::baselines::{opt_lp, opt_lp_oracle};
use bwrk_core::minimizers::{DualMinimizer, Exp3Six, FixedShare, Ogd, PayoffRange, PrimalMinimizer};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn simplex(c: &mut Criterion) {
    let mut group = c.benchmark_group("opt_lp");
    for (k, m) in [(3usize, 1usize), (5, 3), (20, 5)] {
        let inst = lp_instance(k, m, 42);
        group.bench_with_input(BenchmarkId::new("simplex", format!("{k}x{m}")), &inst, |b, inst| {
            b.iter(|| opt_lp(black_box(inst)).unwrap())
        });
    }
    let small = lp_instance(3, 2, 7);
    group.bench_function("grid_oracle_3x2_step_0.01", |b| b.iter(|| opt_lp_oracle(black_box(&small), 0.01)));
    group.finish();
}

fn minimizers(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimizer_round");
    for k in [4usize, 442] {
        group.bench_with_input(BenchmarkId::new("exp3six", k), &k, |b, &k| {
            let mut e = Exp3Six::tuned(k, 10_000, PayoffRange::Unit).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            b.iter(|| {
                let arm = e.next(&mut rng);
                e.observe(arm, &|a| (a % 7) as f64 / 7.0).unwrap();
            })
        });
    }
    group.bench_function("fixed_share_m3", |b| {
        let mut d = FixedShare::tuned(3, 0.5, 10_000).unwrap();
        b.iter(|| {
            let l = d.next();
            d.observe(black_box(&[0.3, -0.2, 0.1])).unwrap();
            l
        })
    });
    group.bench_function("ogd_m3", |b| {
        let mut d = Ogd::new(3, 1e-3).unwrap();
        b.iter(|| {
            let l = d.next();
            d.observe(black_box(&[0.3, -0.2, 0.1])).unwrap();
            l
        })
    });
    group.finish();
}

criterion_group!(benches, simplex, minimizers);
criterion_main!(benches);
