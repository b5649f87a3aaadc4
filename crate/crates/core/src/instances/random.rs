use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::InstanceError;
use crate::game::{CostPolynomial, Game, PlayerSpec};
use crate::rational::{int, Rational};

/// SplitMix64 (Steele, Lea and Flood), chosen for its tiny, portable
/// definition: the same seed yields the same stream in any language.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` by rejection; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        match (hi - lo).checked_add(1) {
            Some(span) => lo + self.below(span),
            None => self.next_u64(),
        }
    }
}

/// Parameters of [`gen_random`]. Coefficients and weights are multiples of
/// `1/denominator` drawn uniformly from their (inclusive) ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub players: usize,
    pub degree: u32,
    pub resources: usize,
    pub strategies_per_player: usize,
    pub max_strategy_size: usize,
    pub coeff_range: (Rational, Rational),
    pub weight_range: (Rational, Rational),
    pub denominator: u64,
    pub seed: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            players: 3,
            degree: 1,
            resources: 4,
            strategies_per_player: 2,
            max_strategy_size: 2,
            coeff_range: (int(0), int(3)),
            weight_range: (int(1), int(3)),
            denominator: 2,
            seed: 0,
        }
    }
}

/// Integer numerators `k` with `lo <= k / den <= hi`.
fn numerator_range(
    (lo, hi): &(Rational, Rational),
    den: u64,
    what: &str,
) -> Result<(u64, u64), InstanceError> {
    let den = Rational::from_integer(BigInt::from(den));
    let a = (lo * &den).ceil().to_integer();
    let b = (hi * &den).floor().to_integer();
    let bad =
        || InstanceError::Infeasible(format!("{what} range [{lo}, {hi}] is empty or too large"));
    let a: u64 = a.try_into().map_err(|_| bad())?;
    let b: u64 = b.try_into().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// A seeded random game. Each coefficient is zero with probability 1/2 and
/// otherwise uniform on `coeff_range`; a resource whose draws are all zero
/// gets its constant term set to the top of the range, so every cost
/// function is nonzero. Strategies are uniformly random resource subsets of
/// size `1..=max_strategy_size`.
pub fn gen_random(params: &RandomParams) -> Result<Game, InstanceError> {
    let p = params;
    if p.players == 0
        || p.resources == 0
        || p.strategies_per_player == 0
        || p.max_strategy_size == 0
    {
        return Err(InstanceError::Infeasible("sizes must be positive".into()));
    }
    if p.degree == 0 {
        return Err(InstanceError::Infeasible(
            "degree must be at least 1".into(),
        ));
    }
    if p.max_strategy_size > p.resources {
        return Err(InstanceError::Infeasible(format!(
            "strategy size {} exceeds the {} resources",
            p.max_strategy_size, p.resources
        )));
    }
    if p.denominator == 0 {
        return Err(InstanceError::Infeasible(
            "denominator must be positive".into(),
        ));
    }
    let (c_lo, c_hi) = numerator_range(&p.coeff_range, p.denominator, "coefficient")?;
    let (w_lo, w_hi) = numerator_range(&p.weight_range, p.denominator, "weight")?;
    if c_hi == 0 {
        return Err(InstanceError::Infeasible(
            "coefficient range must allow a positive value".into(),
        ));
    }
    if w_lo == 0 {
        return Err(InstanceError::Infeasible("weights must be positive".into()));
    }
    let value = |k: u64| Rational::new(BigInt::from(k), BigInt::from(p.denominator));

    let mut rng = SplitMix64::new(p.seed);
    let mut resources = Vec::with_capacity(p.resources);
    for _ in 0..p.resources {
        let mut coeffs: Vec<Rational> = (0..=p.degree)
            .map(|_| {
                if rng.below(2) == 0 {
                    Rational::zero()
                } else {
                    value(rng.between(c_lo, c_hi))
                }
            })
            .collect();
        if coeffs.iter().all(Zero::is_zero) {
            coeffs[0] = value(c_hi);
        }
        resources.push(CostPolynomial::new(coeffs)?);
    }

    let mut players = Vec::with_capacity(p.players);
    for _ in 0..p.players {
        let weight = value(rng.between(w_lo, w_hi));
        let strategies = (0..p.strategies_per_player)
            .map(|_| {
                let size = rng.between(1, p.max_strategy_size as u64) as usize;
                // partial Fisher-Yates
                let mut pool: Vec<usize> = (0..p.resources).collect();
                for k in 0..size {
                    let j = k + rng.below((p.resources - k) as u64) as usize;
                    pool.swap(k, j);
                }
                let mut chosen = pool[..size].to_vec();
                chosen.sort_unstable();
                chosen
            })
            .collect();
        players.push(PlayerSpec::new(weight, strategies));
    }
    Ok(Game::new(p.degree, resources, players)?)
}
