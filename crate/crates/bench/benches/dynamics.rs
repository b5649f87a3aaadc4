use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use wcgame_bench::fixture;
use wcgame_core::dynamics::run_algorithm;
use wcgame_core::rational::int;
use wcgame_core::verify::{audit_trace, brute_force_poa, DEFAULT_STATE_CAP};

fn algorithm(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_algorithm");
    for players in [4, 8, 16] {
        let game = fixture(players, 8, 2, 7);
        let start = game.first_state();
        group.bench_with_input(BenchmarkId::new("paper_exact", players), &game, |b, g| {
            b.iter(|| run_algorithm(black_box(g), &start, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("p_override_4", players), &game, |b, g| {
            b.iter(|| run_algorithm(black_box(g), &start, Some(4)).unwrap())
        });
    }
    group.finish();
}

fn audit(c: &mut Criterion) {
    let game = fixture(8, 8, 2, 7);
    let (_, trace) = run_algorithm(&game, &game.first_state(), Some(4)).unwrap();
    c.bench_function("audit_trace/8_players", |b| {
        b.iter(|| audit_trace(black_box(&game), &trace, false).unwrap())
    });
}

fn brute_force(c: &mut Criterion) {
    let game = fixture(6, 6, 2, 3);
    c.bench_function("brute_force_poa/729_states", |b| {
        b.iter(|| brute_force_poa(black_box(&game), &int(1), DEFAULT_STATE_CAP).unwrap())
    });
}

criterion_group!(benches, algorithm, audit, brute_force);
criterion_main!(benches);
