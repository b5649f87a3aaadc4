//! Best responses, rho-moves and the phased best-response algorithm.

mod algorithm;
mod schedule;
mod trace;

pub use algorithm::run_algorithm;
pub use schedule::{compute_schedule, default_p, empty_profile_min_cost, Schedule};
pub use trace::{read_trace, write_trace, MoveClass, MoveRecord, Trace};

use crate::error::GameError;
use crate::game::{Game, Loads, State};
use crate::rational::Rational;

/// Best response among `player`'s strategies against `loads` (the loads of
/// `state`). Ties go to the lowest strategy index.
pub(crate) fn best_response_with(
    game: &Game,
    state: &State,
    loads: &Loads,
    player: usize,
) -> (usize, Rational) {
    let mut best: Option<(usize, Rational)> = None;
    for k in 0..game.players()[player].strategies.len() {
        let cost = loads.deviation_cost(game, state, player, k);
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((k, cost));
        }
    }
    best.expect("players have at least one strategy")
}

/// `BR_u(s)` and its exact cost. Ties are broken by the lowest index.
pub fn best_response(
    game: &Game,
    state: &State,
    player: usize,
) -> Result<(usize, Rational), GameError> {
    game.check_state(state)?;
    if player >= game.num_players() {
        return Err(GameError::PlayerOutOfRange(player));
    }
    Ok(best_response_with(
        game,
        state,
        &Loads::of(game, state),
        player,
    ))
}

pub(crate) fn rho_move_with(
    game: &Game,
    state: &State,
    loads: &Loads,
    player: usize,
    rho: &Rational,
) -> Option<(usize, Rational, Rational)> {
    let current = loads.cost(game, state, player);
    let (k, br_cost) = best_response_with(game, state, loads, player);
    (current > rho * &br_cost).then_some((k, current, br_cost))
}

/// The best-response witness if `C_u(s) > rho * C_u(s_{-u}, BR_u(s))`
/// (strict), `None` otherwise.
pub fn has_rho_move(
    game: &Game,
    state: &State,
    player: usize,
    rho: &Rational,
) -> Result<Option<usize>, GameError> {
    game.check_state(state)?;
    if player >= game.num_players() {
        return Err(GameError::PlayerOutOfRange(player));
    }
    let loads = Loads::of(game, state);
    Ok(rho_move_with(game, state, &loads, player, rho).map(|(k, _, _)| k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{CostPolynomial, PlayerSpec};
    use crate::rational::{int, ratio};

    fn game() -> Game {
        // resource 0: x, resource 1: 2 (constant), resource 2: x
        Game::new(
            1,
            vec![
                CostPolynomial::monomial(1),
                CostPolynomial::new(vec![int(2)]).unwrap(),
                CostPolynomial::monomial(1),
            ],
            vec![
                PlayerSpec::new(int(1), vec![vec![0], vec![1], vec![2]]),
                PlayerSpec::new(int(1), vec![vec![0]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_strategy_player() {
        let g = game();
        let s = g.state(vec![0, 0]).unwrap();
        assert_eq!(best_response(&g, &s, 1).unwrap(), (0, int(2)));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let g = game();
        // player 0 on resource 0 with player 1: cost 2; resource 1: 2; resource 2: 1
        let s = g.state(vec![2, 0]).unwrap();
        // from resource 2: resource 0 -> 2, resource 1 -> 2, resource 2 -> 1
        assert_eq!(best_response(&g, &s, 0).unwrap(), (2, int(1)));
        let g2 = Game::new(
            1,
            vec![CostPolynomial::monomial(1), CostPolynomial::monomial(1)],
            vec![PlayerSpec::new(int(1), vec![vec![1], vec![0]])],
        )
        .unwrap();
        assert_eq!(
            best_response(&g2, &g2.first_state(), 0).unwrap(),
            (0, int(1))
        );
    }

    #[test]
    fn rho_move_is_strict() {
        let g = game();
        let s = g.state(vec![0, 0]).unwrap();
        // C_0 = 2, best response cost 1 (resource 2): ratio exactly 2
        assert_eq!(has_rho_move(&g, &s, 0, &int(2)).unwrap(), None);
        assert_eq!(has_rho_move(&g, &s, 0, &ratio(19, 10)).unwrap(), Some(2));
        assert_eq!(has_rho_move(&g, &s, 0, &int(1)).unwrap(), Some(2));
        let eq = g.state(vec![2, 0]).unwrap();
        assert_eq!(has_rho_move(&g, &eq, 0, &int(1)).unwrap(), None);
        assert!(has_rho_move(&g, &eq, 5, &int(1)).is_err());
    }
}
