use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::analysis::phi_ratio;
use crate::error::VerifyError;
use crate::game::{Game, Loads, PlayerSet, State};
use crate::potential::{alpha, potential_of_loads};
use crate::rational::{self, to_f64, Rational};
use crate::verify::{player_factor, ExtendedRatio};

pub const DEFAULT_STATE_CAP: u64 = 1_000_000;

/// All states in lexicographic order (player 0 most significant).
pub fn enumerate_states(game: &Game) -> impl Iterator<Item = State> + '_ {
    let sizes: Vec<usize> = game.players().iter().map(|p| p.strategies.len()).collect();
    let mut next = Some(vec![0usize; sizes.len()]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for u in (0..sizes.len()).rev() {
            succ[u] += 1;
            if succ[u] < sizes[u] {
                next = Some(succ);
                break;
            }
            succ[u] = 0;
        }
        Some(State::new(current))
    })
}

fn check_cap(count: BigUint, cap: u64) -> Result<(), VerifyError> {
    if count > BigUint::from(cap) {
        Err(VerifyError::StateSpaceTooLarge {
            count: count.to_string(),
            cap,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoaReport {
    /// Worst `C(s) / C(s*)` over `rho`-equilibria `s`.
    pub poa: ExtendedRatio,
    pub worst_state: State,
    pub optimum_state: State,
    #[serde(with = "rational::serde_str")]
    pub worst_cost: Rational,
    #[serde(with = "rational::serde_str")]
    pub optimum_cost: Rational,
    pub states: u64,
    pub equilibria: u64,
}

/// Exhaustive price of anarchy of `rho`-equilibria. Ties keep the first
/// state in enumeration order.
pub fn brute_force_poa(game: &Game, rho: &Rational, cap: u64) -> Result<PoaReport, VerifyError> {
    check_cap(game.state_count(), cap)?;
    let mut optimum: Option<(Rational, State)> = None;
    let mut worst: Option<(Rational, State)> = None;
    let (mut states, mut equilibria) = (0u64, 0u64);
    for s in enumerate_states(game) {
        states += 1;
        let loads = Loads::of(game, &s);
        let cost = (0..game.num_players())
            .map(|u| loads.cost(game, &s, u))
            .fold(Rational::zero(), |acc, c| acc + c);
        if optimum.as_ref().is_none_or(|(c, _)| cost < *c) {
            optimum = Some((cost.clone(), s.clone()));
        }
        let is_eq =
            (0..game.num_players()).all(|u| player_factor(game, &s, &loads, u).is_at_most(rho));
        if is_eq {
            equilibria += 1;
            if worst.as_ref().is_none_or(|(c, _)| cost > *c) {
                worst = Some((cost, s));
            }
        }
    }
    let (worst_cost, worst_state) = worst.ok_or(VerifyError::NoEquilibrium)?;
    let (optimum_cost, optimum_state) = optimum.expect("at least one state");
    Ok(PoaReport {
        poa: ExtendedRatio::of(&worst_cost, &optimum_cost),
        worst_state,
        optimum_state,
        worst_cost,
        optimum_cost,
        states,
        equilibria,
    })
}

/// Exhaustive check of the group bounds over all triples `(R, s, s')` with
/// `R` nonempty, `s` a `rho`-equilibrium for `R` and `s'` agreeing with `s`
/// outside `R`:
///
/// * `C_R(s) <= (Phi^{d+1} + 1e-6) C_R(s')`,
/// * `Phi_R(s) <= (alpha Phi^{d+1} + 1e-6) Phi_R(s')`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub poa_bound: f64,
    pub stretch_bound: f64,
    pub triples: u64,
    pub worst_cost_ratio: f64,
    pub worst_stretch_ratio: f64,
    pub cost_violations: u64,
    pub stretch_violations: u64,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.cost_violations == 0 && self.stretch_violations == 0
    }
}

/// Slack added to the floating-point bounds of [`check_group_bounds`].
const GROUP_TOLERANCE: f64 = 1e-6;

/// See [`GroupReport`]. The cap applies to the number of state pairs.
pub fn check_group_bounds(
    game: &Game,
    rho: &Rational,
    cap: u64,
) -> Result<GroupReport, VerifyError> {
    let n = game.num_players();
    if n >= 32 {
        return Err(VerifyError::StateSpaceTooLarge {
            count: format!("2^{n} groups"),
            cap,
        });
    }
    let count = game.state_count();
    check_cap(&count * &count, cap)?;
    let d = game.degree();
    let phi = phi_ratio(d, to_f64(rho)).map_err(|e| VerifyError::InvalidRho(e.to_string()))?;
    let poa_bound = phi.powi(d as i32 + 1);
    let stretch_bound = f64::from(alpha(d)) * poa_bound;
    let exact = |x: f64| Rational::from_float(x + GROUP_TOLERANCE).expect("finite bound");
    let (cost_limit, stretch_limit) = (exact(poa_bound), exact(stretch_bound));

    struct Row {
        state: State,
        costs: Vec<Rational>,
        has_move: Vec<bool>,
        potential: Rational,
    }
    let rows: Vec<Row> = enumerate_states(game)
        .map(|s| {
            let loads = Loads::of(game, &s);
            Row {
                costs: (0..n).map(|u| loads.cost(game, &s, u)).collect(),
                has_move: (0..n)
                    .map(|u| !player_factor(game, &s, &loads, u).is_at_most(rho))
                    .collect(),
                potential: potential_of_loads(game, &loads),
                state: s,
            }
        })
        .collect();

    let mut report = GroupReport {
        poa_bound,
        stretch_bound,
        triples: 0,
        worst_cost_ratio: 0.0,
        worst_stretch_ratio: 0.0,
        cost_violations: 0,
        stretch_violations: 0,
    };
    for bits in 1..(1u64 << n) {
        let group = PlayerSet::from_bits(n, bits);
        let outside = group.complement();
        let members = group.members();
        let per_state: Vec<(Rational, Rational)> = rows
            .iter()
            .map(|row| {
                let cost = members
                    .iter()
                    .fold(Rational::zero(), |acc, &u| acc + &row.costs[u]);
                let rest = potential_of_loads(game, &Loads::of_group(game, &row.state, &outside));
                (cost, &row.potential - rest)
            })
            .collect();
        for (i, s) in rows.iter().enumerate() {
            if members.iter().any(|&u| s.has_move[u]) {
                continue;
            }
            let (cost, partial) = &per_state[i];
            for (j, t) in rows.iter().enumerate() {
                if outside
                    .iter()
                    .any(|u| s.state.choice(u) != t.state.choice(u))
                {
                    continue;
                }
                report.triples += 1;
                let (other_cost, other_partial) = &per_state[j];
                let cost_ratio = ExtendedRatio::of(cost, other_cost);
                if !cost_ratio.is_at_most(&cost_limit) {
                    report.cost_violations += 1;
                }
                report.worst_cost_ratio = report.worst_cost_ratio.max(cost_ratio.to_f64());
                let stretch = ExtendedRatio::of(partial, other_partial);
                if !stretch.is_at_most(&stretch_limit) {
                    report.stretch_violations += 1;
                }
                report.worst_stretch_ratio = report.worst_stretch_ratio.max(stretch.to_f64());
            }
        }
    }
    Ok(report)
}

impl PoaReport {
    pub fn poa_f64(&self) -> f64 {
        self.poa.to_f64()
    }
}
