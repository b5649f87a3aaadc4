use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::dynamics::{best_response_with, compute_schedule, MoveClass, Trace};
use crate::error::VerifyError;
use crate::format::fingerprint;
use crate::game::{Game, Loads, PlayerSet, State};
use crate::potential::potential_of_loads;
use crate::rational::{self, Rational};
use crate::verify::{min_equilibrium_factor, ExtendedRatio};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// A move lowered the potential by less than `C_u(before) / (alpha p + 1)`.
    PotentialDrop,
    /// A move was not a best response (lowest index on ties).
    BestResponse,
    /// A move did not beat its class threshold or was taken by an
    /// ineligible player.
    Eligibility,
    /// `Phi_{R_i}(s^{i-1}) > n p b_i`.
    KeyProperty,
    /// `Phi_{R_i}(s^i) > alpha * sum_{u in R_i} C_u(i)`.
    PhaseEndPotential,
    /// `C_u(s^{m-1}) > (1 + 3/p) C_u(s^j)` for a player fixed after phase `j`.
    CostInflation,
    /// `C_u(s^{m-1}_{-u}, s'_u) < (1 - 2/p) C_u(s^j_{-u}, s'_u)`.
    DeviationDecay,
    MoveBudget,
    /// Final equilibrium factor above `p (p + 3) / (p - 2)`.
    FinalFactor,
    /// A player was never fixed.
    Unfixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: Check,
    pub phase: Option<usize>,
    pub step: Option<usize>,
    pub player: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveAudit {
    pub step: usize,
    pub phase: usize,
    pub player: usize,
    #[serde(with = "rational::serde_str")]
    pub drop: Rational,
    /// `C_u(before) / (alpha p + 1)`.
    #[serde(with = "rational::serde_str")]
    pub required: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseAudit {
    pub phase: usize,
    pub movers: Vec<usize>,
    pub moves: usize,
    #[serde(with = "rational::serde_bigint")]
    pub budget: BigInt,
    /// `b_i`.
    #[serde(with = "rational::serde_str")]
    pub boundary: Rational,
    /// `Phi_{R_i}(s^{i-1})`, for phases `i >= 1`.
    #[serde(with = "opt_rational")]
    pub start_partial_potential: Option<Rational>,
    /// `n p b_i - Phi_{R_i}(s^{i-1})`, for phases `i >= 1`.
    #[serde(with = "opt_rational")]
    pub key_slack: Option<Rational>,
    /// `Phi_{R_i}(s^i)`.
    #[serde(with = "rational::serde_str")]
    pub end_partial_potential: Rational,
    /// `alpha * sum_{u in R_i} C_u(i) - Phi_{R_i}(s^i)`.
    #[serde(with = "rational::serde_str")]
    pub end_slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedAudit {
    pub player: usize,
    /// Phase after which the player was fixed.
    pub phase: usize,
    #[serde(with = "rational::serde_str")]
    pub cost_at_fix: Rational,
    #[serde(with = "rational::serde_str")]
    pub final_cost: Rational,
    /// `(1 + 3/p) C_u(s^j) - C_u(s^{m-1})`.
    #[serde(with = "rational::serde_str")]
    pub inflation_slack: Rational,
    pub deviations_checked: usize,
}

/// Result of [`audit_trace`]. The trace passed when `findings` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub paper_exact: bool,
    pub moves: Vec<MoveAudit>,
    pub phases: Vec<PhaseAudit>,
    pub fixed: Vec<FixedAudit>,
    pub final_factor: ExtendedRatio,
    #[serde(with = "rational::serde_str")]
    pub factor_ceiling: Rational,
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

mod opt_rational {
    use serde::Serializer;

    use crate::rational::{format_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }
}

fn mismatch(detail: String) -> VerifyError {
    VerifyError::TraceMismatch(detail)
}

fn partial_potential_of(game: &Game, state: &State, group: &PlayerSet) -> Rational {
    let all = potential_of_loads(game, &Loads::of(game, state));
    all - potential_of_loads(game, &Loads::of_group(game, state, &group.complement()))
}

/// Replays `trace` on `game`, recomputing every recorded cost, potential,
/// state, mover set and fixed set from scratch (any disagreement is a
/// [`VerifyError::TraceMismatch`]), then checks the per-move, per-phase and
/// per-player bounds of the algorithm. Failed bounds become findings.
///
/// The deviation bound for fixed players is checked at the final best
/// response, or at every strategy when `all_deviations` is set.
pub fn audit_trace(
    game: &Game,
    trace: &Trace,
    all_deviations: bool,
) -> Result<AuditReport, VerifyError> {
    if fingerprint(game) != trace.game_fingerprint {
        return Err(mismatch("game fingerprint differs".into()));
    }
    let p_override = if trace.schedule.paper_exact {
        None
    } else {
        Some(
            trace
                .schedule
                .p
                .to_u64()
                .ok_or_else(|| mismatch("p does not fit in 64 bits".into()))?,
        )
    };
    let schedule = compute_schedule(game, &trace.initial_state, p_override)?;
    if schedule != trace.schedule {
        return Err(mismatch("schedule differs from recomputation".into()));
    }
    let n = game.num_players();
    let m = schedule.m;
    if trace.phase_end_states.len() != m
        || trace.movers_per_phase.len() != m
        || trace.fixed_sets.len() != m
    {
        return Err(mismatch(format!("expected {m} phases")));
    }
    for (k, mv) in trace.moves.iter().enumerate() {
        if mv.step != k {
            return Err(mismatch(format!("move {k} has step {}", mv.step)));
        }
        if mv.phase >= m || (k > 0 && mv.phase < trace.moves[k - 1].phase) {
            return Err(mismatch(format!(
                "move {k} has phase {} out of order",
                mv.phase
            )));
        }
    }

    let p = schedule.p_rational();
    let alpha = Rational::from_integer(BigInt::from(schedule.alpha));
    let drop_divisor = &alpha * &p + Rational::one();
    let fine = schedule.alpha_threshold();
    let mut findings = Vec::new();
    let mut move_audits = Vec::with_capacity(trace.moves.len());
    let mut phases = Vec::with_capacity(m);

    let mut state = trace.initial_state.clone();
    let mut loads = Loads::of(game, &state);
    let mut fixed_at: Vec<Option<usize>> = vec![None; n];
    let mut next_move = 0;

    for phase in 0..m {
        let upper = schedule.boundary(phase);
        let lower = schedule.boundary(phase + 1);
        let mut moved = vec![false; n];
        let mut last_cost: Vec<Option<Rational>> = vec![None; n];
        let mut count = 0usize;
        while let Some(mv) = trace.moves.get(next_move).filter(|mv| mv.phase == phase) {
            next_move += 1;
            count += 1;
            let u = mv.player;
            let at = |what: &str| mismatch(format!("move {}: {what}", mv.step));
            if u >= n {
                return Err(at("player out of range"));
            }
            if mv.from_strategy != state.choice(u) {
                return Err(at("from_strategy is not the current strategy"));
            }
            if mv.to_strategy >= game.players()[u].strategies.len() {
                return Err(at("to_strategy out of range"));
            }
            let cost_before = loads.cost(game, &state, u);
            if cost_before != mv.cost_before {
                return Err(at("cost_before differs"));
            }
            let cost_after = loads.deviation_cost(game, &state, u, mv.to_strategy);
            if cost_after != mv.cost_after {
                return Err(at("cost_after differs"));
            }
            let potential_before = potential_of_loads(game, &loads);
            if potential_before != mv.potential_before {
                return Err(at("potential_before differs"));
            }

            let finding = |check, detail: String| Finding {
                check,
                phase: Some(phase),
                step: Some(mv.step),
                player: Some(u),
                detail,
            };
            let (br, br_cost) = best_response_with(game, &state, &loads, u);
            if br != mv.to_strategy || br_cost != cost_after {
                findings.push(finding(
                    Check::BestResponse,
                    format!("moved to {} but the best response is {br}", mv.to_strategy),
                ));
            }
            let (threshold, eligible) = match (phase, mv.move_class) {
                (0, MoveClass::AlphaMove) => (&fine, cost_before >= *lower),
                (0, MoveClass::PMove) => (&p, false),
                (_, MoveClass::PMove) => (&p, fixed_at[u].is_none() && cost_before >= *upper),
                (_, MoveClass::AlphaMove) => (
                    &fine,
                    fixed_at[u].is_none() && cost_before >= *lower && cost_before < *upper,
                ),
            };
            if !eligible || cost_before <= threshold * &cost_after {
                findings.push(finding(
                    Check::Eligibility,
                    format!("{:?} from cost {} not allowed", mv.move_class, cost_before),
                ));
            }

            loads.apply_move(game, u, mv.from_strategy, mv.to_strategy);
            state.set(u, mv.to_strategy);
            let potential_after = potential_of_loads(game, &loads);
            if potential_after != mv.potential_after {
                return Err(at("potential_after differs"));
            }
            let drop = &potential_before - &potential_after;
            let required = &cost_before / &drop_divisor;
            if drop < required {
                findings.push(finding(
                    Check::PotentialDrop,
                    format!("drop {drop} below {required}"),
                ));
            }
            move_audits.push(MoveAudit {
                step: mv.step,
                phase,
                player: u,
                drop,
                required,
            });
            moved[u] = true;
            last_cost[u] = Some(cost_after);
        }

        if state != trace.phase_end_states[phase] {
            return Err(mismatch(format!("phase {phase}: end state differs")));
        }
        let movers: Vec<usize> = (0..n).filter(|&u| moved[u]).collect();
        if movers != trace.movers_per_phase[phase] {
            return Err(mismatch(format!("phase {phase}: mover set differs")));
        }
        let budget = schedule.move_budget(n, phase);
        if BigInt::from(count) > budget {
            findings.push(Finding {
                check: Check::MoveBudget,
                phase: Some(phase),
                step: None,
                player: None,
                detail: format!("{count} moves exceed budget {budget}"),
            });
        }

        let group = PlayerSet::from_indices(n, movers.iter().copied());
        let (start_partial_potential, key_slack) = if phase >= 1 {
            let start = partial_potential_of(game, &trace.phase_end_states[phase - 1], &group);
            let bound = Rational::from_integer(BigInt::from(n)) * &p * upper;
            let slack = bound - &start;
            if slack < Rational::zero() {
                findings.push(Finding {
                    check: Check::KeyProperty,
                    phase: Some(phase),
                    step: None,
                    player: None,
                    detail: format!("partial potential {start} exceeds n p b_i by {}", -&slack),
                });
            }
            (Some(start), Some(slack))
        } else {
            (None, None)
        };
        let end = partial_potential_of(game, &state, &group);
        let last_sum = last_cost
            .iter()
            .flatten()
            .fold(Rational::zero(), |acc, c| acc + c);
        let end_slack = &alpha * last_sum - &end;
        if end_slack < Rational::zero() {
            findings.push(Finding {
                check: Check::PhaseEndPotential,
                phase: Some(phase),
                step: None,
                player: None,
                detail: format!("partial potential {end} exceeds alpha times last-move costs"),
            });
        }

        // the fixing rule
        let mut expected: Vec<usize> = Vec::new();
        let mut fix_at = |bound: &Rational, fixed_at: &mut Vec<Option<usize>>| {
            for u in 0..n {
                if fixed_at[u].is_none() && loads.cost(game, &state, u) >= *bound {
                    fixed_at[u] = Some(phase);
                    expected.push(u);
                }
            }
        };
        if phase >= 1 {
            fix_at(upper, &mut fixed_at);
        }
        if phase == m - 1 {
            fix_at(schedule.boundary(m), &mut fixed_at);
        }
        let mut recorded = trace.fixed_sets[phase].clone();
        recorded.sort_unstable();
        expected.sort_unstable();
        if recorded != expected {
            return Err(mismatch(format!("phase {phase}: fixed set differs")));
        }

        phases.push(PhaseAudit {
            phase,
            movers,
            moves: count,
            budget,
            boundary: upper.clone(),
            start_partial_potential,
            key_slack,
            end_partial_potential: end,
            end_slack,
        });
    }
    if next_move != trace.moves.len() {
        return Err(mismatch("moves recorded after the last phase".into()));
    }

    let final_state = &state;
    let final_loads = &loads;
    let inflation = Rational::one() + Rational::from_integer(BigInt::from(3)) / &p;
    let decay = Rational::one() - Rational::from_integer(BigInt::from(2)) / &p;
    let mut fixed = Vec::new();
    for u in 0..n {
        let Some(j) = fixed_at[u] else {
            findings.push(Finding {
                check: Check::Unfixed,
                phase: None,
                step: None,
                player: Some(u),
                detail: "never fixed".into(),
            });
            continue;
        };
        let at_fix = &trace.phase_end_states[j];
        let fix_loads = Loads::of(game, at_fix);
        let cost_at_fix = fix_loads.cost(game, at_fix, u);
        let final_cost = final_loads.cost(game, final_state, u);
        let inflation_slack = &inflation * &cost_at_fix - &final_cost;
        let finding = |check, detail| Finding {
            check,
            phase: Some(j),
            step: None,
            player: Some(u),
            detail,
        };
        if inflation_slack < Rational::zero() {
            findings.push(finding(
                Check::CostInflation,
                format!("cost grew from {cost_at_fix} to {final_cost}"),
            ));
        }
        let deviations: Vec<usize> = if all_deviations {
            (0..game.players()[u].strategies.len()).collect()
        } else {
            vec![best_response_with(game, final_state, final_loads, u).0]
        };
        for &k in &deviations {
            let now = final_loads.deviation_cost(game, final_state, u, k);
            let then = fix_loads.deviation_cost(game, at_fix, u, k);
            if now < &decay * &then {
                findings.push(finding(
                    Check::DeviationDecay,
                    format!("deviation to {k} fell from {then} to {now}"),
                ));
            }
        }
        fixed.push(FixedAudit {
            player: u,
            phase: j,
            cost_at_fix,
            final_cost,
            inflation_slack,
            deviations_checked: deviations.len(),
        });
    }

    let final_factor = min_equilibrium_factor(game, final_state, None)?;
    let factor_ceiling = schedule.factor_ceiling();
    if !final_factor.is_at_most(&factor_ceiling) {
        findings.push(Finding {
            check: Check::FinalFactor,
            phase: None,
            step: None,
            player: None,
            detail: format!("factor {final_factor} exceeds {factor_ceiling}"),
        });
    }
    Ok(AuditReport {
        paper_exact: schedule.paper_exact,
        moves: move_audits,
        phases,
        fixed,
        final_factor,
        factor_ceiling,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::run_algorithm;
    use crate::game::{CostPolynomial, PlayerSpec};
    use crate::rational::int;

    fn crowded() -> Game {
        let strategies = vec![vec![0], vec![1], vec![2]];
        Game::new(
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
        .unwrap()
    }

    #[test]
    fn paper_exact_run_passes() {
        let g = crowded();
        let (_, trace) = run_algorithm(&g, &g.first_state(), None).unwrap();
        assert!(!trace.moves.is_empty());
        let report = audit_trace(&g, &trace, true).unwrap();
        assert!(report.passed(), "{:?}", report.findings);
        assert_eq!(report.moves.len(), trace.moves.len());
        assert_eq!(report.phases.len(), trace.schedule.m);
        assert_eq!(report.fixed.len(), 4);
        assert!(report.phases.iter().skip(1).all(|p| p.key_slack.is_some()));
    }

    #[test]
    fn zero_move_trace_passes() {
        let g = Game::new(
            1,
            vec![CostPolynomial::monomial(1), CostPolynomial::monomial(1)],
            vec![PlayerSpec::new(int(1), vec![vec![0], vec![1]]); 2],
        )
        .unwrap();
        let start = g.state(vec![0, 1]).unwrap();
        let (_, trace) = run_algorithm(&g, &start, None).unwrap();
        assert!(trace.moves.is_empty());
        let report = audit_trace(&g, &trace, false).unwrap();
        assert!(report.passed());
        assert_eq!(report.final_factor, ExtendedRatio::Finite(int(1)));
    }

    #[test]
    fn tampering_is_detected() {
        let g = crowded();
        let (_, trace) = run_algorithm(&g, &g.first_state(), None).unwrap();
        let mut bad = trace.clone();
        bad.moves[0].cost_after += int(1);
        assert!(matches!(
            audit_trace(&g, &bad, false),
            Err(VerifyError::TraceMismatch(_))
        ));

        let mut bad = trace.clone();
        bad.moves[0].potential_after -= int(1);
        assert!(matches!(
            audit_trace(&g, &bad, false),
            Err(VerifyError::TraceMismatch(_))
        ));

        let mut bad = trace.clone();
        bad.fixed_sets
            .iter_mut()
            .find(|f| !f.is_empty())
            .unwrap()
            .pop();
        assert!(matches!(
            audit_trace(&g, &bad, false),
            Err(VerifyError::TraceMismatch(_))
        ));

        let mut bad = trace.clone();
        bad.game_fingerprint = "00".into();
        assert!(matches!(
            audit_trace(&g, &bad, false),
            Err(VerifyError::TraceMismatch(_))
        ));

        let mut bad = trace;
        bad.moves.pop();
        assert!(matches!(
            audit_trace(&g, &bad, false),
            Err(VerifyError::TraceMismatch(_))
        ));
    }
}
