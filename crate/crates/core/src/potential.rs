//! The approximate (Faulhaber-style) potential and its group aggregations.
//!
//! For a resource with cost `c(x) = sum_k a_k x^k` the resource potential is
//!
//! ```text
//! phi(x) = a_0 x + sum_{k>=1} a_k (x^{k+1} + (k+1)/2 * x^k)
//! ```
//!
//! It satisfies `w c(x+w) <= phi(x+w) - phi(x) <= (d+1) w c(x+w)` for `w >= 1`,
//! so any move that improves a player's cost by more than a factor `d + 1`
//! strictly lowers the total potential.

use num_traits::{Signed, Zero};

use crate::error::GameError;
use crate::game::{CostPolynomial, Game, Loads, PlayerSet, State};
use crate::rational::{ratio, Rational};

/// The factor `alpha = d + 1` by which the potential approximates player
/// costs.
pub const fn alpha(degree: u32) -> u32 {
    degree + 1
}

/// Coefficients of `phi` as a polynomial in `x` (constant term first).
fn potential_coeffs(f: &CostPolynomial) -> Vec<Rational> {
    let a = f.coeffs();
    let d = a.len() - 1;
    let mut b = vec![Rational::zero(); d + 2];
    b[1] = a[0].clone();
    for (k, ak) in a.iter().enumerate().skip(1) {
        b[k + 1] += ak;
        b[k] += ak * ratio(k as i64 + 1, 2);
    }
    b
}

fn eval_unchecked(f: &CostPolynomial, x: &Rational) -> Rational {
    potential_coeffs(f)
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, b| acc * x + b)
}

/// `phi_e(x)` for `x >= 0`.
pub fn resource_potential(f: &CostPolynomial, x: &Rational) -> Result<Rational, GameError> {
    if x.is_negative() {
        return Err(GameError::NegativeLoad);
    }
    Ok(eval_unchecked(f, x))
}

pub(crate) fn potential_of_loads(game: &Game, loads: &Loads) -> Rational {
    game.resources()
        .iter()
        .zip(loads.as_slice())
        .filter(|(_, x)| !x.is_zero())
        .map(|(f, x)| eval_unchecked(f, x))
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// `Phi(s) = sum_e phi_e(x_e(s))`.
pub fn potential(game: &Game, state: &State) -> Result<Rational, GameError> {
    game.check_state(state)?;
    Ok(potential_of_loads(game, &Loads::of(game, state)))
}

/// `Phi(s)_R = sum_e phi_e(x_{R,e}(s))`.
pub fn subgame_potential(
    game: &Game,
    state: &State,
    group: &PlayerSet,
) -> Result<Rational, GameError> {
    game.check_state(state)?;
    if group.universe() != game.num_players() {
        return Err(GameError::GroupLength {
            expected: game.num_players(),
            got: group.universe(),
        });
    }
    Ok(potential_of_loads(
        game,
        &Loads::of_group(game, state, group),
    ))
}

/// `Phi_R(s) = Phi(s) - Phi(s)_{N \ R}`.
pub fn partial_potential(
    game: &Game,
    state: &State,
    group: &PlayerSet,
) -> Result<Rational, GameError> {
    Ok(potential(game, state)? - subgame_potential(game, state, &group.complement())?)
}
