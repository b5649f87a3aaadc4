use num_bigint::BigInt;
use num_traits::One;

use crate::dynamics::schedule::{compute_schedule, Schedule};
use crate::dynamics::trace::{MoveClass, MoveRecord, Trace};
use crate::dynamics::{best_response_with, rho_move_with};
use crate::error::DynamicsError;
use crate::format::fingerprint;
use crate::game::{Game, Loads, State};
use crate::potential::potential_of_loads;
use crate::rational::Rational;

struct Run<'a> {
    game: &'a Game,
    schedule: Schedule,
    state: State,
    loads: Loads,
    fixed: Vec<bool>,
    moves: Vec<MoveRecord>,
    phase_end_states: Vec<State>,
    movers_per_phase: Vec<Vec<usize>>,
    fixed_sets: Vec<Vec<usize>>,
}

impl Run<'_> {
    fn cost(&self, u: usize) -> Rational {
        self.loads.cost(self.game, &self.state, u)
    }

    /// Best-responds for `u` and records the move.
    fn play(&mut self, phase: usize, u: usize, class: MoveClass) {
        let (to, cost_after) = best_response_with(self.game, &self.state, &self.loads, u);
        let from = self.state.choice(u);
        let cost_before = self.cost(u);
        let potential_before = potential_of_loads(self.game, &self.loads);
        self.loads.apply_move(self.game, u, from, to);
        self.state.set(u, to);
        let potential_after = potential_of_loads(self.game, &self.loads);
        self.moves.push(MoveRecord {
            phase,
            step: self.moves.len(),
            player: u,
            from_strategy: from,
            to_strategy: to,
            cost_before,
            cost_after,
            move_class: class,
            potential_before,
            potential_after,
        });
    }

    /// Repeats: pick the lowest-index eligible player, let it best-respond.
    fn run_phase(
        &mut self,
        phase: usize,
        mut eligible: impl FnMut(&Self, usize) -> Option<MoveClass>,
    ) -> Result<(), DynamicsError> {
        let budget = self.schedule.move_budget(self.game.num_players(), phase);
        let mut count = BigInt::from(0);
        let mut movers = vec![false; self.game.num_players()];
        loop {
            let Some((u, class)) = (0..self.game.num_players())
                .find_map(|u| eligible(self, u).map(|class| (u, class)))
            else {
                break;
            };
            count += 1;
            if count > budget {
                return Err(DynamicsError::MoveBudgetExceeded {
                    phase,
                    budget: budget.to_string(),
                });
            }
            self.play(phase, u, class);
            movers[u] = true;
        }
        self.phase_end_states.push(self.state.clone());
        self.movers_per_phase.push(
            movers
                .iter()
                .enumerate()
                .filter_map(|(u, &b)| b.then_some(u))
                .collect(),
        );
        self.fixed_sets.push(Vec::new());
        Ok(())
    }

    /// Fixes every non-fixed player whose current cost is at least `bound`.
    fn fix_at_least(&mut self, phase: usize, bound: &Rational) {
        for u in 0..self.game.num_players() {
            if !self.fixed[u] && self.cost(u) >= *bound {
                self.fixed[u] = true;
                self.fixed_sets[phase].push(u);
            }
        }
    }

    fn has_move(&self, u: usize, rho: &Rational) -> bool {
        rho_move_with(self.game, &self.state, &self.loads, u, rho).is_some()
    }
}

/// Runs the phased best-response algorithm from `initial`.
///
/// Phase 0 lets any player with cost at least `b_1` play an
/// `(alpha + 1/p)`-move. Phase `i = 1..m-1` lets a non-fixed player move if
/// its cost lies in `[b_{i+1}, b_i)` and it has an `(alpha + 1/p)`-move, or
/// its cost is at least `b_i` and it has a `p`-move; afterwards every
/// non-fixed player with cost at least `b_i` is fixed. Finally all players
/// with cost at least `b_m` are fixed. Within a phase the lowest-index
/// eligible player moves first, and every move is a best response.
///
/// The game must have all weights at least 1 (see [`Game::normalize`]).
pub fn run_algorithm(
    game: &Game,
    initial: &State,
    p_override: Option<u64>,
) -> Result<(State, Trace), DynamicsError> {
    if let Some(player) = (0..game.num_players()).find(|&u| *game.weight(u) < Rational::one()) {
        return Err(DynamicsError::NotNormalized { player });
    }
    let schedule = compute_schedule(game, initial, p_override)?;
    let fine = schedule.alpha_threshold();
    let coarse = schedule.p_rational();
    let m = schedule.m;

    let mut run = Run {
        game,
        state: initial.clone(),
        loads: Loads::of(game, initial),
        fixed: vec![false; game.num_players()],
        moves: Vec::new(),
        phase_end_states: Vec::new(),
        movers_per_phase: Vec::new(),
        fixed_sets: Vec::new(),
        schedule,
    };

    let b1 = run.schedule.boundary(1).clone();
    run.run_phase(0, |r, u| {
        (r.cost(u) >= b1 && r.has_move(u, &fine)).then_some(MoveClass::AlphaMove)
    })?;

    for i in 1..m {
        let upper = run.schedule.boundary(i).clone();
        let lower = run.schedule.boundary(i + 1).clone();
        run.run_phase(i, |r, u| {
            if r.fixed[u] {
                return None;
            }
            let cost = r.cost(u);
            if cost >= upper {
                r.has_move(u, &coarse).then_some(MoveClass::PMove)
            } else if cost >= lower {
                r.has_move(u, &fine).then_some(MoveClass::AlphaMove)
            } else {
                None
            }
        })?;
        run.fix_at_least(i, &upper);
    }
    let last = run.schedule.boundary(m).clone();
    run.fix_at_least(m - 1, &last);
    debug_assert!(run.fixed.iter().all(|&f| f));

    let trace = Trace {
        game_fingerprint: fingerprint(game),
        initial_state: initial.clone(),
        schedule: run.schedule,
        moves: run.moves,
        phase_end_states: run.phase_end_states,
        movers_per_phase: run.movers_per_phase,
        fixed_sets: run.fixed_sets,
    };
    Ok((run.state, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{read_trace, write_trace};
    use crate::game::{CostPolynomial, PlayerSpec};
    use crate::rational::{int, ratio};

    #[test]
    fn single_player_moves_at_most_once() {
        let g = Game::new(
            1,
            vec![
                CostPolynomial::new(vec![int(10)]).unwrap(),
                CostPolynomial::monomial(1),
            ],
            vec![PlayerSpec::new(int(1), vec![vec![0], vec![1]])],
        )
        .unwrap();
        let (end, trace) = run_algorithm(&g, &g.first_state(), None).unwrap();
        assert_eq!(end, State::new(vec![1]));
        assert_eq!(trace.moves.len(), 1);
        assert_eq!(trace.moves[0].cost_before, int(10));
        assert_eq!(trace.moves[0].cost_after, int(1));
        // c_max / c_min = 10, so m = 4 and that player is fixed once phase 1 ends
        assert_eq!(trace.schedule.m, 4);
        assert_eq!(trace.fixed_phase(0), Some(1));
    }

    #[test]
    fn already_balanced_start_makes_no_moves() {
        let g = Game::new(
            1,
            vec![CostPolynomial::monomial(1), CostPolynomial::monomial(1)],
            vec![
                PlayerSpec::new(int(1), vec![vec![0], vec![1]]),
                PlayerSpec::new(int(1), vec![vec![0], vec![1]]),
            ],
        )
        .unwrap();
        let start = g.state(vec![0, 1]).unwrap();
        let (end, trace) = run_algorithm(&g, &start, None).unwrap();
        assert_eq!(end, start);
        assert!(trace.moves.is_empty());
        let fixed: usize = trace.fixed_sets.iter().map(Vec::len).sum();
        assert_eq!(fixed, 2);
    }

    #[test]
    fn rejects_light_players() {
        let g = Game::new(
            1,
            vec![CostPolynomial::monomial(1)],
            vec![PlayerSpec::new(ratio(1, 2), vec![vec![0]])],
        )
        .unwrap();
        assert_eq!(
            run_algorithm(&g, &g.first_state(), None).unwrap_err(),
            DynamicsError::NotNormalized { player: 0 }
        );
    }

    #[test]
    fn moves_improve_by_threshold_and_lower_potential() {
        // four players crowding one of three linear resources
        let strategies = vec![vec![0], vec![1], vec![2]];
        let g = Game::new(
            1,
            vec![
                CostPolynomial::new(vec![int(0), int(4)]).unwrap(),
                CostPolynomial::new(vec![int(1), int(1)]).unwrap(),
                CostPolynomial::new(vec![int(3)]).unwrap(),
            ],
            (1..=4)
                .map(|w| PlayerSpec::new(int(w), strategies.clone()))
                .collect(),
        )
        .unwrap();
        let (_, trace) = run_algorithm(&g, &g.first_state(), Some(3)).unwrap();
        assert!(!trace.moves.is_empty());
        for m in &trace.moves {
            let threshold = match m.move_class {
                MoveClass::AlphaMove => trace.schedule.alpha_threshold(),
                MoveClass::PMove => trace.schedule.p_rational(),
            };
            assert!(m.cost_before > threshold * &m.cost_after);
            assert!(m.potential_after < m.potential_before);
        }
        assert_eq!(read_trace(&write_trace(&trace)).unwrap(), trace);
    }
}
