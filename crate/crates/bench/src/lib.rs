//! Shared fixtures for the criterion benchmarks.

use wcgame_core::instances::{gen_random, RandomParams};
use wcgame_core::Game;

/// A seeded random game of the given size with weights in `[1, 3]`.
pub fn fixture(players: usize, resources: usize, degree: u32, seed: u64) -> Game {
    gen_random(&RandomParams {
        players,
        degree,
        resources,
        strategies_per_player: 3,
        max_strategy_size: 3.min(resources),
        seed,
        ..RandomParams::default()
    })
    .expect("valid parameters")
}
