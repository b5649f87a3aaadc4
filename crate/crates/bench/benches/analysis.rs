use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use wcgame_core::analysis::{
    check_lemmacomb, check_smoothness_constraint, lambert_w, phi_ratio, poa_bounds, GridSpec,
};

fn scalars(c: &mut Criterion) {
    c.bench_function("lambert_w", |b| {
        b.iter(|| lambert_w(black_box(0.75)).unwrap())
    });
    c.bench_function("phi_ratio/d=6", |b| {
        b.iter(|| phi_ratio(black_box(6), 2.0).unwrap())
    });
    c.bench_function("poa_bounds/d=4", |b| {
        b.iter(|| poa_bounds(black_box(4), 1.5).unwrap())
    });
}

fn grids(c: &mut Criterion) {
    let grid = GridSpec::default();
    let r = poa_bounds(3, 1.0).unwrap();
    c.bench_function("check_smoothness_constraint/d=3", |b| {
        b.iter(|| {
            check_smoothness_constraint(3, 1.0, r.lambda_hat, r.mu_hat, black_box(&grid)).unwrap()
        })
    });
    c.bench_function("check_lemmacomb/d=3", |b| {
        b.iter(|| check_lemmacomb(3, 1.0, black_box(&grid)).unwrap())
    });
}

criterion_group!(benches, scalars, grids);
criterion_main!(benches);
