//! Equilibrium factors, exhaustive price-of-anarchy oracles and trace audits.

mod audit;
mod brute;

pub use audit::{audit_trace, AuditReport, Check, Finding, FixedAudit, MoveAudit, PhaseAudit};
pub use brute::{
    brute_force_poa, check_group_bounds, enumerate_states, GroupReport, PoaReport,
    DEFAULT_STATE_CAP,
};

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::dynamics::best_response_with;
use crate::error::GameError;
use crate::game::{Game, Loads, PlayerSet, State};
use crate::rational::{format_rational, to_f64, Rational};

/// A nonnegative ratio that may be `+inf` (positive over zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedRatio {
    Finite(Rational),
    Infinite,
}

impl ExtendedRatio {
    /// `num / den` for nonnegative values, with `0/0 = 1`.
    pub fn of(num: &Rational, den: &Rational) -> Self {
        if !den.is_zero() {
            Self::Finite(num / den)
        } else if num.is_zero() {
            Self::Finite(Rational::one())
        } else {
            Self::Infinite
        }
    }

    pub fn is_at_most(&self, bound: &Rational) -> bool {
        match self {
            Self::Finite(r) => r <= bound,
            Self::Infinite => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Finite(r) => to_f64(r),
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Self::Finite(r) => Some(r),
            Self::Infinite => None,
        }
    }
}

impl PartialOrd for ExtendedRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
            (Self::Finite(_), Self::Infinite) => Ordering::Less,
            (Self::Infinite, Self::Finite(_)) => Ordering::Greater,
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => f.write_str(&format_rational(r)),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Largest improvement factor available to a player, against precomputed
/// loads.
pub(crate) fn player_factor(game: &Game, state: &State, loads: &Loads, u: usize) -> ExtendedRatio {
    let current = loads.cost(game, state, u);
    let (_, best) = best_response_with(game, state, loads, u);
    ExtendedRatio::of(&current, &best)
}

/// `max_{u in R} C_u(s) / C_u(s_{-u}, BR_u(s))`: the state is a
/// `rho`-equilibrium for `R` exactly when this is at most `rho`. `R`
/// defaults to all players; an empty group gives 1.
pub fn min_equilibrium_factor(
    game: &Game,
    state: &State,
    group: Option<&PlayerSet>,
) -> Result<ExtendedRatio, GameError> {
    game.check_state(state)?;
    if let Some(r) = group {
        if r.universe() != game.num_players() {
            return Err(GameError::GroupLength {
                expected: game.num_players(),
                got: r.universe(),
            });
        }
    }
    let loads = Loads::of(game, state);
    let members: Vec<usize> = match group {
        Some(r) => r.members(),
        None => (0..game.num_players()).collect(),
    };
    Ok(members
        .into_iter()
        .map(|u| player_factor(game, state, &loads, u))
        .max()
        .unwrap_or(ExtendedRatio::Finite(Rational::one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{CostPolynomial, PlayerSpec};
    use crate::rational::{int, ratio};

    #[test]
    fn ratio_conventions() {
        assert_eq!(
            ExtendedRatio::of(&int(0), &int(0)),
            ExtendedRatio::Finite(int(1))
        );
        assert_eq!(ExtendedRatio::of(&int(3), &int(0)), ExtendedRatio::Infinite);
        assert_eq!(
            ExtendedRatio::of(&int(3), &int(2)),
            ExtendedRatio::Finite(ratio(3, 2))
        );
        assert!(ExtendedRatio::Infinite > ExtendedRatio::Finite(int(1_000_000)));
        assert!(!ExtendedRatio::Infinite.is_at_most(&int(5)));
        assert_eq!(ExtendedRatio::Infinite.to_string(), "inf");
        assert_eq!(ExtendedRatio::Finite(ratio(6, 4)).to_string(), "3/2");
    }

    #[test]
    fn factors() {
        // x and 2x, two unit players
        let g = Game::new(
            1,
            vec![
                CostPolynomial::monomial(1),
                CostPolynomial::new(vec![int(0), int(2)]).unwrap(),
            ],
            vec![
                PlayerSpec::new(int(1), vec![vec![0], vec![1]]),
                PlayerSpec::new(int(1), vec![vec![0], vec![1]]),
            ],
        )
        .unwrap();
        // both on x: cost 2 each, deviation to 2x costs 2
        let s = g.state(vec![0, 0]).unwrap();
        assert_eq!(
            min_equilibrium_factor(&g, &s, None).unwrap(),
            ExtendedRatio::Finite(int(1))
        );
        // both on 2x: cost 4, deviation to x costs 1
        let bad = g.state(vec![1, 1]).unwrap();
        assert_eq!(
            min_equilibrium_factor(&g, &bad, None).unwrap(),
            ExtendedRatio::Finite(int(4))
        );
        let none = PlayerSet::empty(2);
        assert_eq!(
            min_equilibrium_factor(&g, &bad, Some(&none)).unwrap(),
            ExtendedRatio::Finite(int(1))
        );
        assert!(min_equilibrium_factor(&g, &bad, Some(&PlayerSet::empty(3))).is_err());
    }

    #[test]
    fn zero_cost_deviation_is_infinite() {
        let g = Game::new(
            1,
            vec![
                CostPolynomial::monomial(1),
                CostPolynomial::new(vec![int(0)]).unwrap(),
            ],
            vec![PlayerSpec::new(int(1), vec![vec![0], vec![1]])],
        )
        .unwrap();
        let s = g.first_state();
        assert_eq!(
            min_equilibrium_factor(&g, &s, None).unwrap(),
            ExtendedRatio::Infinite
        );
        let at_best = g.state(vec![1]).unwrap();
        assert_eq!(
            min_equilibrium_factor(&g, &at_best, None).unwrap(),
            ExtendedRatio::Finite(int(1))
        );
    }
}
