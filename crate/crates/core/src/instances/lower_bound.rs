use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::InstanceError;
use crate::game::{CostPolynomial, Game, PlayerSpec, State};
use crate::rational::{int, Rational};

/// A member of the tight lower-bound family together with its two
/// distinguished states.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundBundle {
    /// Singleton game with `n` players and `n + 1` resources. Player `i` may
    /// use resource `i` (strategy 0) or resource `i + 1` (strategy 1).
    pub game: Game,
    /// Every player on its second resource.
    pub equilibrium_state: State,
    /// Every player on its first resource.
    pub optimal_state: State,
    /// The rational stand-in for `Phi(d, rho)`.
    pub phi_approx: Rational,
    pub precision_digits: u32,
    /// `|Phi^{d+1} / (Phi+1)^d - rho|` at `phi_approx`: the equilibrium state
    /// is a `(rho +- rho_error)`-equilibrium.
    pub rho_error: Rational,
}

/// `x^{d+1} - rho (x+1)^d`, increasing through its unique positive root.
fn excess(d: u32, rho: &Rational, x: &Rational) -> Rational {
    Pow::pow(x, d + 1) - rho * Pow::pow(&(x + Rational::one()), d)
}

/// `Phi(d, rho)` to `digits` significant decimal digits, by exact bisection.
/// The result `r` satisfies `|r - Phi| <= Phi * 10^{-digits}`.
pub fn phi_rational(d: u32, rho: &Rational, digits: u32) -> Rational {
    let mut lo = Rational::one();
    let mut hi = int(2);
    while !excess(d, rho, &hi).is_positive() {
        lo = hi.clone();
        hi *= int(2);
    }
    let scale = Rational::from_integer(Pow::pow(&BigInt::from(10), digits));
    let two = int(2);
    while (&hi - &lo) * &scale > lo {
        let mid = (&lo + &hi) / &two;
        let e = excess(d, rho, &mid);
        if e.is_zero() {
            return mid;
        }
        if e.is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / two
}

/// Builds the `n`-player lower-bound instance for degree `d` and factor `rho`.
///
/// With `w = 1/Phi`, player `i = 1..n` has weight `w^i`; resource 1 costs
/// `Phi^{d+2} / rho` and resource `j >= 2` costs `Phi^{(d+1) j} t^d`. In the
/// state where everyone uses resource `i + 1` each player's cost is
/// `Phi^{d+1}` and its best deviation improves it by exactly `rho`, so the
/// social cost ratio to the other state tends to `Phi^{d+1}`.
///
/// The weights are below 1 and the game is intentionally left unnormalized.
pub fn gen_lower_bound(
    d: u32,
    rho: &Rational,
    n: usize,
    precision_digits: u32,
) -> Result<LowerBoundBundle, InstanceError> {
    if precision_digits < 10 {
        return Err(InstanceError::PrecisionTooLow(precision_digits));
    }
    if d == 0 {
        return Err(InstanceError::Infeasible(
            "degree must be at least 1".into(),
        ));
    }
    if *rho < Rational::one() {
        return Err(InstanceError::Infeasible(format!(
            "rho must be at least 1, got {rho}"
        )));
    }
    if n == 0 {
        return Err(InstanceError::Infeasible("need at least one player".into()));
    }
    let phi = phi_rational(d, rho, precision_digits);
    let w = phi.recip();

    let mut first = vec![Rational::zero(); d as usize + 1];
    first[0] = Pow::pow(&phi, d + 2) / rho;
    let mut resources = vec![CostPolynomial::new(first)?];
    for j in 2..=n as u32 + 1 {
        let mut coeffs = vec![Rational::zero(); d as usize + 1];
        coeffs[d as usize] = Pow::pow(&phi, (d + 1) * j);
        resources.push(CostPolynomial::new(coeffs)?);
    }
    let mut weight = Rational::one();
    let players = (0..n)
        .map(|i| {
            weight *= &w;
            PlayerSpec::new(weight.clone(), vec![vec![i], vec![i + 1]])
        })
        .collect();
    let game = Game::new(d, resources, players)?;

    let rho_error = (Pow::pow(&phi, d + 1) / Pow::pow(&(&phi + Rational::one()), d) - rho).abs();
    Ok(LowerBoundBundle {
        game,
        equilibrium_state: State::new(vec![1; n]),
        optimal_state: State::new(vec![0; n]),
        phi_approx: phi,
        precision_digits,
        rho_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, to_f64};

    #[test]
    fn golden_ratio_digits() {
        let phi = phi_rational(1, &int(1), 30);
        // 1.618033988749894848204586834366 (reference expansion)
        let reference = Rational::new(
            "1618033988749894848204586834366".parse().unwrap(),
            Pow::pow(&BigInt::from(10), 30u32),
        );
        assert!(
            (&phi - &reference).abs() * Rational::from_integer(Pow::pow(&BigInt::from(10), 29u32))
                < int(1)
        );
        // the defining equation x^2 = x + 1 nearly holds
        let residual = (&phi * &phi - &phi - int(1)).abs();
        assert!(residual < Rational::new(BigInt::one(), Pow::pow(&BigInt::from(10), 29u32)));
    }

    #[test]
    fn two_player_golden_instance() {
        let b = gen_lower_bound(1, &int(1), 2, 20).unwrap();
        let g = &b.game;
        assert_eq!(g.num_players(), 2);
        assert_eq!(g.num_resources(), 3);
        let f = |x: &Rational| to_f64(x);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((f(g.weight(0)) - 0.618_033_988_749_895).abs() < 1e-12);
        assert!((f(g.weight(1)) - 0.381_966_011_250_105_1).abs() < 1e-12);
        assert!((f(&g.resources()[0].coeffs()[0]) - golden.powi(3)).abs() < 1e-12);
        assert!((f(&g.resources()[1].coeffs()[1]) - golden.powi(4)).abs() < 1e-11);
        assert!((f(&g.resources()[2].coeffs()[1]) - golden.powi(6)).abs() < 1e-10);
        assert!(g.resources()[1].coeffs()[0].is_zero());
    }

    #[test]
    fn costs_follow_the_construction() {
        for (d, rho, n) in [(1, int(1), 4), (2, ratio(3, 2), 3), (3, int(2), 5)] {
            let b = gen_lower_bound(d, &rho, n, 25).unwrap();
            let g = &b.game;
            let phi = &b.phi_approx;
            let top = Pow::pow(phi, d + 1);
            for i in 0..n {
                assert_eq!(g.player_cost(&b.equilibrium_state, i).unwrap(), top);
                let star = if i == 0 { &top / &rho } else { int(1) };
                assert_eq!(g.player_cost(&b.optimal_state, i).unwrap(), star);
            }
            let eq = g.social_cost(&b.equilibrium_state).unwrap();
            let opt = g.social_cost(&b.optimal_state).unwrap();
            assert_eq!(eq, &top * int(n as i64));
            assert_eq!(opt, &top / &rho + int(n as i64 - 1));
            let tol = Rational::new(BigInt::one(), Pow::pow(&BigInt::from(10), 23u32));
            assert!(b.rho_error < tol);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            gen_lower_bound(1, &int(1), 3, 9).unwrap_err(),
            InstanceError::PrecisionTooLow(9)
        );
        assert!(gen_lower_bound(0, &int(1), 3, 10).is_err());
        assert!(gen_lower_bound(1, &ratio(1, 2), 3, 10).is_err());
        assert!(gen_lower_bound(1, &int(1), 0, 10).is_err());
    }
}
