//! Weighted polynomial congestion games with exact rational arithmetic.
//!
//! A game has `n` weighted players and a set of resources, each carrying a
//! polynomial cost function with nonnegative coefficients. A player's cost at a
//! state is its weight times the sum of the costs of the resources in its
//! chosen strategy, each evaluated at the resource's total load.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::GameError;
use crate::rational::Rational;

/// Cost polynomial `c(x) = a_0 + a_1 x + ... + a_d x^d` with `a_k >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostPolynomial {
    coeffs: Vec<Rational>,
}

impl CostPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, GameError> {
        Self::checked(coeffs, 0)
    }

    fn checked(coeffs: Vec<Rational>, resource: usize) -> Result<Self, GameError> {
        if coeffs.is_empty() {
            return Err(GameError::EmptyPolynomial { resource });
        }
        if let Some(index) = coeffs.iter().position(|a| a.is_negative()) {
            return Err(GameError::NegativeCoefficient { resource, index });
        }
        Ok(Self { coeffs })
    }

    /// `c(x) = x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Highest index with a nonzero coefficient, `None` for the zero polynomial.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|a| !a.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.effective_degree().is_none()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    /// Pads or trims (zero) trailing coefficients so that `len == degree + 1`.
    fn fit_to_degree(mut self, degree: u32, resource: usize) -> Result<Self, GameError> {
        let len = degree as usize + 1;
        if self.coeffs.len() > len {
            if self.coeffs[len..].iter().any(|a| !a.is_zero()) {
                return Err(GameError::DegreeMismatch { resource, degree });
            }
            self.coeffs.truncate(len);
        }
        self.coeffs.resize(len, Rational::zero());
        Ok(self)
    }

    /// `a'_k = a_k * factor^k`, i.e. `c'(x) = c(factor * x)`.
    fn rescaled(&self, factor: &Rational) -> Self {
        let mut power = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &power;
                power *= factor;
                out
            })
            .collect();
        Self { coeffs }
    }
}

/// A player: a positive weight and a nonempty list of strategies, each a
/// duplicate-free set of resource indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlayerSpec {
    pub weight: Rational,
    pub strategies: Vec<Vec<usize>>,
}

impl PlayerSpec {
    pub fn new(weight: Rational, strategies: Vec<Vec<usize>>) -> Self {
        Self { weight, strategies }
    }
}

/// One strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct State(Vec<usize>);

impl State {
    pub fn new(choices: Vec<usize>) -> Self {
        Self(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn choice(&self, player: usize) -> usize {
        self.0[player]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(s_{-u}, k)`.
    pub fn with_choice(&self, player: usize, strategy: usize) -> Self {
        let mut next = self.clone();
        next.0[player] = strategy;
        next
    }

    pub(crate) fn set(&mut self, player: usize, strategy: usize) {
        self.0[player] = strategy;
    }
}

/// A group of players `R ⊆ N`, stored as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlayerSet(Vec<bool>);

impl PlayerSet {
    pub fn all(n: usize) -> Self {
        Self(vec![true; n])
    }

    pub fn empty(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self(mask)
    }

    /// Members given by index; panics if an index is `>= n`.
    pub fn from_indices(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; n];
        for u in members {
            mask[u] = true;
        }
        Self(mask)
    }

    /// Bit `u` of `bits` selects player `u` (`n <= 64`).
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self((0..n).map(|u| bits >> u & 1 == 1).collect())
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, player: usize) -> bool {
        self.0.get(player).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, player: usize) {
        self.0[player] = true;
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| !b).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(u, _)| u)
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|b| *b)
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// A validated weighted polynomial congestion game of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Game {
    degree: u32,
    resources: Vec<CostPolynomial>,
    players: Vec<PlayerSpec>,
    normalized: bool,
}

impl Game {
    pub fn new(
        degree: u32,
        resources: Vec<CostPolynomial>,
        players: Vec<PlayerSpec>,
    ) -> Result<Self, GameError> {
        if degree < 1 {
            return Err(GameError::InvalidDegree);
        }
        if players.is_empty() {
            return Err(GameError::NoPlayers);
        }
        let resources = resources
            .into_iter()
            .enumerate()
            .map(|(e, f)| {
                CostPolynomial::checked(f.coeffs, e).and_then(|f| f.fit_to_degree(degree, e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (u, player) in players.iter().enumerate() {
            if !player.weight.is_positive() {
                return Err(GameError::NonPositiveWeight { player: u });
            }
            if player.strategies.is_empty() {
                return Err(GameError::NoStrategies { player: u });
            }
            for (k, strategy) in player.strategies.iter().enumerate() {
                if strategy.is_empty() {
                    return Err(GameError::EmptyStrategy {
                        player: u,
                        strategy: k,
                    });
                }
                let mut seen = vec![false; resources.len()];
                for &e in strategy {
                    if e >= resources.len() {
                        return Err(GameError::ResourceOutOfRange {
                            player: u,
                            strategy: k,
                            resource: e,
                        });
                    }
                    if std::mem::replace(&mut seen[e], true) {
                        return Err(GameError::DuplicateResource {
                            player: u,
                            strategy: k,
                            resource: e,
                        });
                    }
                }
            }
        }
        let normalized = players.iter().all(|p| p.weight >= Rational::one());
        Ok(Self {
            degree,
            resources,
            players,
            normalized,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn resources(&self) -> &[CostPolynomial] {
        &self.resources
    }

    pub fn players(&self) -> &[PlayerSpec] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_resources(&self) -> usize {
        self.resources.len()
    }

    pub fn weight(&self, player: usize) -> &Rational {
        &self.players[player].weight
    }

    pub fn strategy(&self, player: usize, index: usize) -> &[usize] {
        &self.players[player].strategies[index]
    }

    /// True when every weight is at least 1.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Product of the strategy-list lengths, i.e. `|S|`.
    pub fn state_count(&self) -> num_bigint::BigUint {
        self.players
            .iter()
            .map(|p| num_bigint::BigUint::from(p.strategies.len()))
            .product()
    }

    /// Rescales so that the minimum weight is 1: `w' = w / w_min` and
    /// `a'_k = a_k * w_min^k`. Every player cost is divided by `w_min`, so all
    /// cost ratios are preserved exactly. Identity when `w_min >= 1`.
    pub fn normalize(&self) -> Game {
        let w_min = self
            .players
            .iter()
            .map(|p| &p.weight)
            .min()
            .expect("nonempty")
            .clone();
        if w_min >= Rational::one() {
            return self.clone();
        }
        let resources = self.resources.iter().map(|f| f.rescaled(&w_min)).collect();
        let players = self
            .players
            .iter()
            .map(|p| PlayerSpec::new(&p.weight / &w_min, p.strategies.clone()))
            .collect();
        Game {
            degree: self.degree,
            resources,
            players,
            normalized: true,
        }
    }

    pub fn check_state(&self, state: &State) -> Result<(), GameError> {
        if state.len() != self.num_players() {
            return Err(GameError::StateLength {
                expected: self.num_players(),
                got: state.len(),
            });
        }
        for (u, &k) in state.choices().iter().enumerate() {
            if k >= self.players[u].strategies.len() {
                return Err(GameError::StrategyOutOfRange {
                    player: u,
                    strategy: k,
                });
            }
        }
        Ok(())
    }

    /// Builds and validates a state.
    pub fn state(&self, choices: Vec<usize>) -> Result<State, GameError> {
        let state = State::new(choices);
        self.check_state(&state)?;
        Ok(state)
    }

    /// The state where every player picks strategy 0.
    pub fn first_state(&self) -> State {
        State::new(vec![0; self.num_players()])
    }

    fn check_group(&self, group: &PlayerSet) -> Result<(), GameError> {
        if group.universe() != self.num_players() {
            return Err(GameError::GroupLength {
                expected: self.num_players(),
                got: group.universe(),
            });
        }
        Ok(())
    }

    fn check_player(&self, player: usize) -> Result<(), GameError> {
        if player >= self.num_players() {
            return Err(GameError::PlayerOutOfRange(player));
        }
        Ok(())
    }

    fn check_resource(&self, resource: usize) -> Result<(), GameError> {
        if resource >= self.num_resources() {
            return Err(GameError::ResourceIndexOutOfRange(resource));
        }
        Ok(())
    }

    /// `x_e(s)`: total weight of players whose strategy contains `e`.
    pub fn load(&self, state: &State, resource: usize) -> Result<Rational, GameError> {
        self.group_load(state, &PlayerSet::all(self.num_players()), resource)
    }

    /// `x_{R,e}(s)`: total weight of players in `R` whose strategy contains `e`.
    pub fn group_load(
        &self,
        state: &State,
        group: &PlayerSet,
        resource: usize,
    ) -> Result<Rational, GameError> {
        self.check_state(state)?;
        self.check_group(group)?;
        self.check_resource(resource)?;
        Ok(group
            .iter()
            .filter(|&u| self.strategy(u, state.choice(u)).contains(&resource))
            .map(|u| self.weight(u))
            .fold(Rational::zero(), |acc, w| acc + w))
    }

    /// `C_u(s) = w_u * sum_{e in s_u} c_e(x_e(s))`.
    pub fn player_cost(&self, state: &State, player: usize) -> Result<Rational, GameError> {
        self.check_state(state)?;
        self.check_player(player)?;
        Ok(Loads::of(self, state).cost(self, state, player))
    }

    /// `C_R(s) = sum_{u in R} C_u(s)`.
    pub fn group_cost(&self, state: &State, group: &PlayerSet) -> Result<Rational, GameError> {
        self.check_state(state)?;
        self.check_group(group)?;
        let loads = Loads::of(self, state);
        Ok(group
            .iter()
            .map(|u| loads.cost(self, state, u))
            .fold(Rational::zero(), |acc, c| acc + c))
    }

    /// The per-resource form `sum_e x_{R,e}(s) c_e(x_e(s))`; equal to
    /// [`Game::group_cost`].
    pub fn group_cost_by_resource(
        &self,
        state: &State,
        group: &PlayerSet,
    ) -> Result<Rational, GameError> {
        self.check_state(state)?;
        self.check_group(group)?;
        let total = Loads::of(self, state);
        let part = Loads::of_group(self, state, group);
        Ok((0..self.num_resources())
            .filter(|&e| !part.get(e).is_zero())
            .map(|e| part.get(e) * self.resources[e].eval(total.get(e)))
            .fold(Rational::zero(), |acc, c| acc + c))
    }

    /// Social cost `C(s)`.
    pub fn social_cost(&self, state: &State) -> Result<Rational, GameError> {
        self.group_cost(state, &PlayerSet::all(self.num_players()))
    }
}

/// Per-resource loads of a fixed state, supporting incremental moves and
/// evaluation of unilateral deviations.
///
/// Methods assume the state was validated against the game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loads(Vec<Rational>);

impl Loads {
    pub fn of(game: &Game, state: &State) -> Self {
        let mut loads = vec![Rational::zero(); game.num_resources()];
        for (u, &k) in state.choices().iter().enumerate() {
            for &e in game.strategy(u, k) {
                loads[e] += game.weight(u);
            }
        }
        Self(loads)
    }

    pub fn of_group(game: &Game, state: &State, group: &PlayerSet) -> Self {
        let mut loads = vec![Rational::zero(); game.num_resources()];
        for u in group.iter() {
            for &e in game.strategy(u, state.choice(u)) {
                loads[e] += game.weight(u);
            }
        }
        Self(loads)
    }

    pub fn get(&self, resource: usize) -> &Rational {
        &self.0[resource]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// `C_u(s)`.
    pub fn cost(&self, game: &Game, state: &State, player: usize) -> Rational {
        let sum = game
            .strategy(player, state.choice(player))
            .iter()
            .map(|&e| game.resources[e].eval(&self.0[e]))
            .fold(Rational::zero(), |acc, c| acc + c);
        game.weight(player) * sum
    }

    /// `C_u(s_{-u}, k)` for the strategy with index `k`.
    pub fn deviation_cost(&self, game: &Game, state: &State, player: usize, k: usize) -> Rational {
        let current = game.strategy(player, state.choice(player));
        let w = game.weight(player);
        let sum = game
            .strategy(player, k)
            .iter()
            .map(|&e| {
                if current.contains(&e) {
                    game.resources[e].eval(&self.0[e])
                } else {
                    game.resources[e].eval(&(&self.0[e] + w))
                }
            })
            .fold(Rational::zero(), |acc, c| acc + c);
        w * sum
    }

    /// Moves `player` from strategy `from` to strategy `to`.
    pub fn apply_move(&mut self, game: &Game, player: usize, from: usize, to: usize) {
        let w = game.weight(player);
        for &e in game.strategy(player, from) {
            self.0[e] -= w;
        }
        for &e in game.strategy(player, to) {
            self.0[e] += w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn linear() -> CostPolynomial {
        CostPolynomial::monomial(1)
    }

    fn two_player_shared() -> Game {
        Game::new(
            1,
            vec![linear(), CostPolynomial::new(vec![int(2)]).unwrap()],
            vec![
                PlayerSpec::new(int(1), vec![vec![0], vec![1]]),
                PlayerSpec::new(ratio(3, 2), vec![vec![0], vec![0, 1]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn polynomial_eval_and_degree() {
        let f = CostPolynomial::new(vec![int(1), int(0), int(3)]).unwrap();
        assert_eq!(f.eval(&int(2)), int(13));
        assert_eq!(f.effective_degree(), Some(2));
        assert!(CostPolynomial::new(vec![int(0)]).unwrap().is_zero());
        assert_eq!(
            CostPolynomial::new(vec![int(1), ratio(-1, 2)]),
            Err(GameError::NegativeCoefficient {
                resource: 0,
                index: 1
            })
        );
    }

    #[test]
    fn trailing_zeros_fit_degree() {
        let g = Game::new(
            1,
            vec![CostPolynomial::new(vec![int(1), int(1), int(0)]).unwrap()],
            vec![PlayerSpec::new(int(1), vec![vec![0]])],
        )
        .unwrap();
        assert_eq!(g.resources()[0].coeffs().len(), 2);
        let err = Game::new(
            1,
            vec![CostPolynomial::new(vec![int(1), int(1), int(1)]).unwrap()],
            vec![PlayerSpec::new(int(1), vec![vec![0]])],
        );
        assert_eq!(
            err,
            Err(GameError::DegreeMismatch {
                resource: 0,
                degree: 1
            })
        );
    }

    #[test]
    fn validation_errors() {
        let p = |s: Vec<Vec<usize>>| vec![PlayerSpec::new(int(1), s)];
        assert_eq!(
            Game::new(1, vec![linear()], p(vec![vec![]])),
            Err(GameError::EmptyStrategy {
                player: 0,
                strategy: 0
            })
        );
        assert_eq!(
            Game::new(1, vec![linear()], p(vec![vec![0, 0]])),
            Err(GameError::DuplicateResource {
                player: 0,
                strategy: 0,
                resource: 0
            })
        );
        assert_eq!(
            Game::new(1, vec![linear()], p(vec![vec![1]])),
            Err(GameError::ResourceOutOfRange {
                player: 0,
                strategy: 0,
                resource: 1
            })
        );
        assert_eq!(
            Game::new(0, vec![linear()], p(vec![vec![0]])),
            Err(GameError::InvalidDegree)
        );
        assert_eq!(
            Game::new(1, vec![linear()], vec![]),
            Err(GameError::NoPlayers)
        );
        assert_eq!(
            Game::new(
                1,
                vec![linear()],
                vec![PlayerSpec::new(int(0), vec![vec![0]])]
            ),
            Err(GameError::NonPositiveWeight { player: 0 })
        );
    }

    #[test]
    fn loads_and_costs() {
        let g = two_player_shared();
        let s = g.state(vec![0, 0]).unwrap();
        assert_eq!(g.load(&s, 0).unwrap(), ratio(5, 2));
        assert_eq!(g.load(&s, 1).unwrap(), int(0));
        // C_0 = 1 * 5/2, C_1 = 3/2 * 5/2
        assert_eq!(g.player_cost(&s, 0).unwrap(), ratio(5, 2));
        assert_eq!(g.player_cost(&s, 1).unwrap(), ratio(15, 4));
        let all = PlayerSet::all(2);
        assert_eq!(g.group_cost(&s, &all).unwrap(), ratio(25, 4));
        assert_eq!(g.group_cost_by_resource(&s, &all).unwrap(), ratio(25, 4));
        let none = PlayerSet::empty(2);
        assert_eq!(g.group_cost(&s, &none).unwrap(), int(0));
        assert_eq!(g.group_load(&s, &none, 0).unwrap(), int(0));
    }

    #[test]
    fn single_player_square() {
        let g = Game::new(
            2,
            vec![CostPolynomial::monomial(2)],
            vec![PlayerSpec::new(int(1), vec![vec![0]])],
        )
        .unwrap();
        assert_eq!(g.player_cost(&g.first_state(), 0).unwrap(), int(1));
    }

    #[test]
    fn deviation_cost_matches_fresh_evaluation() {
        let g = two_player_shared();
        let s = g.state(vec![0, 1]).unwrap();
        let loads = Loads::of(&g, &s);
        for u in 0..2 {
            for k in 0..2 {
                let direct = g.player_cost(&s.with_choice(u, k), u).unwrap();
                assert_eq!(loads.deviation_cost(&g, &s, u, k), direct);
            }
        }
    }

    #[test]
    fn out_of_range_indices() {
        let g = two_player_shared();
        let s = g.first_state();
        assert_eq!(g.load(&s, 9), Err(GameError::ResourceIndexOutOfRange(9)));
        assert_eq!(g.player_cost(&s, 2), Err(GameError::PlayerOutOfRange(2)));
        assert!(g.state(vec![0, 2]).is_err());
        assert!(g.state(vec![0]).is_err());
    }

    #[test]
    fn normalize_scales_weights_and_coefficients() {
        let g = Game::new(
            1,
            vec![linear()],
            vec![
                PlayerSpec::new(ratio(1, 2), vec![vec![0]]),
                PlayerSpec::new(int(1), vec![vec![0]]),
            ],
        )
        .unwrap();
        assert!(!g.is_normalized());
        let h = g.normalize();
        assert!(h.is_normalized());
        assert_eq!(h.weight(0), &int(1));
        assert_eq!(h.weight(1), &int(2));
        assert_eq!(h.resources()[0].coeffs(), &[int(0), ratio(1, 2)]);
        // every cost scales by 1 / w_min = 2
        let s = g.first_state();
        for u in 0..2 {
            assert_eq!(
                h.player_cost(&s, u).unwrap(),
                g.player_cost(&s, u).unwrap() * int(2)
            );
        }
        let already = two_player_shared();
        assert_eq!(already.normalize(), already);
    }

    mod props {
        use super::*;
        use crate::instances::{gen_random, RandomParams, SplitMix64};
        use proptest::prelude::*;

        fn random_case(seed: u64, light: bool) -> (Game, State, PlayerSet) {
            let params = RandomParams {
                players: 4,
                degree: 3,
                resources: 5,
                strategies_per_player: 3,
                max_strategy_size: 3,
                weight_range: if light {
                    (ratio(1, 4), int(3))
                } else {
                    (int(1), int(3))
                },
                denominator: 4,
                seed,
                ..RandomParams::default()
            };
            let g = gen_random(&params).unwrap();
            let mut rng = SplitMix64::new(seed ^ 0x5EED);
            let s = State::new((0..4).map(|_| rng.below(3) as usize).collect());
            let r = PlayerSet::from_bits(4, rng.below(16));
            (g, s, r)
        }

        proptest! {
            #[test]
            fn loads_partition_by_group(seed in any::<u64>()) {
                let (g, s, r) = random_case(seed, false);
                let rest = r.complement();
                for e in 0..g.num_resources() {
                    let total = g.load(&s, e).unwrap();
                    let split = g.group_load(&s, &r, e).unwrap() + g.group_load(&s, &rest, e).unwrap();
                    prop_assert_eq!(total, split);
                }
            }

            #[test]
            fn group_costs_aggregate(seed in any::<u64>()) {
                let (g, s, r) = random_case(seed, false);
                let by_player = g.group_cost(&s, &r).unwrap();
                prop_assert_eq!(&by_player, &g.group_cost_by_resource(&s, &r).unwrap());
                let rest = g.group_cost(&s, &r.complement()).unwrap();
                prop_assert_eq!(by_player + rest, g.social_cost(&s).unwrap());
            }

            #[test]
            fn deviation_costs_match_fresh_states(seed in any::<u64>(), u in 0usize..4, k in 0usize..3) {
                let (g, s, _) = random_case(seed, false);
                let loads = Loads::of(&g, &s);
                let moved = s.with_choice(u, k);
                prop_assert_eq!(loads.deviation_cost(&g, &s, u, k), g.player_cost(&moved, u).unwrap());
                let mut incremental = loads.clone();
                incremental.apply_move(&g, u, s.choice(u), k);
                prop_assert_eq!(incremental, Loads::of(&g, &moved));
            }

            #[test]
            fn costs_are_monotone(seed in any::<u64>(), a in 0i64..400, b in 0i64..400) {
                let (g, _, _) = random_case(seed, false);
                let (x, y) = (ratio(a.min(b), 7), ratio(a.max(b), 7));
                for f in g.resources() {
                    prop_assert!(f.eval(&x) <= f.eval(&y));
                }
            }

            #[test]
            fn normalization_scales_every_cost_alike(seed in any::<u64>(), u in 0usize..4, k in 0usize..3) {
                let (g, s, _) = random_case(seed, true);
                let h = g.normalize();
                prop_assert!(h.is_normalized());
                let w_min = (0..4).map(|v| g.weight(v).clone()).min().unwrap();
                let w_min = w_min.min(int(1));
                let moved = s.with_choice(u, k);
                for t in [&s, &moved] {
                    prop_assert_eq!(
                        h.player_cost(t, u).unwrap() * &w_min,
                        g.player_cost(t, u).unwrap()
                    );
                }
                // improvement directions survive
                let before = g.player_cost(&s, u).unwrap().cmp(&g.player_cost(&moved, u).unwrap());
                let after = h.player_cost(&s, u).unwrap().cmp(&h.player_cost(&moved, u).unwrap());
                prop_assert_eq!(before, after);
            }
        }
    }
}
