use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;
use crate::game::{Game, Loads, State};
use crate::potential::alpha;
use crate::rational::{self, Rational};

/// Constants driving the phased algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    #[serde(with = "rational::serde_bigint")]
    pub p: BigInt,
    pub alpha: u32,
    #[serde(with = "rational::serde_str")]
    pub c_max: Rational,
    #[serde(with = "rational::serde_str")]
    pub c_min: Rational,
    pub m: usize,
    #[serde(with = "rational::serde_bigint")]
    pub g: BigInt,
    /// `b_0 = c_max, ..., b_m`, with `b_i = c_max / g^i`.
    #[serde(with = "rational::serde_str_vec")]
    pub boundaries: Vec<Rational>,
    /// False when `p` was overridden.
    pub paper_exact: bool,
}

impl Schedule {
    pub fn p_rational(&self) -> Rational {
        Rational::from_integer(self.p.clone())
    }

    /// `alpha + 1/p`, the threshold of the fine-grained moves.
    pub fn alpha_threshold(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.alpha))
            + Rational::new(BigInt::one(), self.p.clone())
    }

    pub fn boundary(&self, i: usize) -> &Rational {
        &self.boundaries[i]
    }

    /// Move budget of a phase: `n alpha g (alpha p + 1)` for phase 0 and
    /// `n g (alpha p + 1) p` afterwards.
    pub fn move_budget(&self, n: usize, phase: usize) -> BigInt {
        let alpha = BigInt::from(self.alpha);
        let base = BigInt::from(n) * &self.g * (&alpha * &self.p + 1);
        if phase == 0 {
            base * alpha
        } else {
            base * &self.p
        }
    }

    /// Ceiling on the final equilibrium factor, `p (1 + 3/p) / (1 - 2/p)`.
    pub fn factor_ceiling(&self) -> Rational {
        // p (p + 3) / (p - 2)
        Rational::new(&self.p * (&self.p + 3), &self.p - 2)
    }
}

/// `p = (2d + 3)(d + 1)(4d)^{d+1}`.
pub fn default_p(degree: u32) -> BigInt {
    let d = BigInt::from(degree);
    (BigInt::from(2) * &d + 3) * (&d + 1) * (BigInt::from(4) * &d).pow(degree + 1)
}

/// `min_u min_{s'_u} w_u sum_{e in s'_u} c_e(w_u)` together with the
/// minimizing player: the cheapest best response against the empty profile.
pub fn empty_profile_min_cost(game: &Game) -> (usize, Rational) {
    (0..game.num_players())
        .map(|u| {
            let w = game.weight(u);
            let cheapest = game.players()[u]
                .strategies
                .iter()
                .map(|strategy| {
                    w * strategy
                        .iter()
                        .map(|&e| game.resources()[e].eval(w))
                        .fold(Rational::zero(), |acc, c| acc + c)
                })
                .min()
                .expect("nonempty strategies");
            (u, cheapest)
        })
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("nonempty players")
}

/// Derives `p`, `c_max`, `c_min`, `m`, `g` and the boundaries for a run from
/// `initial`.
///
/// `m = max(1, ceil(log2(c_max / c_min)))`.
pub fn compute_schedule(
    game: &Game,
    initial: &State,
    p_override: Option<u64>,
) -> Result<Schedule, DynamicsError> {
    game.check_state(initial)?;
    let d = game.degree();
    let alpha = alpha(d);
    let p = match p_override {
        Some(p) if p < u64::from(d) + 2 => {
            return Err(DynamicsError::InvalidOverride {
                p,
                min: u64::from(d) + 2,
            })
        }
        Some(p) => BigInt::from(p),
        None => default_p(d),
    };
    let paper_exact = p == default_p(d);

    let loads = Loads::of(game, initial);
    let c_max = (0..game.num_players())
        .map(|u| loads.cost(game, initial, u))
        .max()
        .expect("nonempty players");
    if c_max.is_zero() {
        return Err(DynamicsError::AlreadyZero);
    }
    let (argmin, c_min) = empty_profile_min_cost(game);
    if c_min.is_zero() {
        return Err(DynamicsError::ZeroMinCost { player: argmin });
    }

    let mut m = 0usize;
    let mut reach = c_min.clone();
    while reach < c_max {
        reach *= Rational::from_integer(BigInt::from(2));
        m += 1;
    }
    let m = m.max(1);

    let n = BigInt::from(game.num_players());
    let d_big = BigInt::from(d);
    let spread: BigInt = BigInt::one() + BigInt::from(m) * (&p + 1);
    let g: BigInt = n * Pow::pow(&p, 3u32) * Pow::pow(&spread, d) * Pow::pow(&d_big, d) + 1;
    let g_rat = Rational::from_integer(g.clone());
    let mut boundaries = Vec::with_capacity(m + 1);
    let mut b = c_max.clone();
    boundaries.push(b.clone());
    for _ in 0..m {
        b /= &g_rat;
        boundaries.push(b.clone());
    }
    debug_assert!(boundaries[m] <= c_min);
    Ok(Schedule {
        p,
        alpha,
        c_max,
        c_min,
        m,
        g,
        boundaries,
        paper_exact,
    })
}
