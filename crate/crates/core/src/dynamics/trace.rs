//! Run traces and their JSON Lines form.
//!
//! The first line is a header carrying the schedule; each move follows as one
//! line, and every phase closes with a `phase_end` line recording the state,
//! the players who moved and the players fixed at that point.

use serde::{Deserialize, Serialize};

use crate::dynamics::Schedule;
use crate::error::GameError;
use crate::game::State;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveClass {
    /// Improvement by more than `alpha + 1/p`.
    AlphaMove,
    /// Improvement by more than `p` from a cost at or above the phase boundary.
    PMove,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub phase: usize,
    pub step: usize,
    pub player: usize,
    pub from_strategy: usize,
    pub to_strategy: usize,
    #[serde(with = "rational::serde_str")]
    pub cost_before: Rational,
    #[serde(with = "rational::serde_str")]
    pub cost_after: Rational,
    pub move_class: MoveClass,
    #[serde(with = "rational::serde_str")]
    pub potential_before: Rational,
    #[serde(with = "rational::serde_str")]
    pub potential_after: Rational,
}

/// Everything a run did, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// SHA-256 fingerprint of the game the run used.
    pub game_fingerprint: String,
    pub initial_state: State,
    pub schedule: Schedule,
    pub moves: Vec<MoveRecord>,
    /// `s^0, ..., s^{m-1}`.
    pub phase_end_states: Vec<State>,
    /// `R_i`: players who moved at least once in phase `i`, ascending.
    pub movers_per_phase: Vec<Vec<usize>>,
    /// Players fixed at the end of phase `i`, ascending. The final fixing step
    /// is attributed to phase `m - 1`.
    pub fixed_sets: Vec<Vec<usize>>,
}

impl Trace {
    pub fn final_state(&self) -> &State {
        self.phase_end_states.last().unwrap_or(&self.initial_state)
    }

    pub fn moves_in_phase(&self, phase: usize) -> impl Iterator<Item = &MoveRecord> {
        self.moves.iter().filter(move |m| m.phase == phase)
    }

    /// Phase at whose end `player` was fixed.
    pub fn fixed_phase(&self, player: usize) -> Option<usize> {
        self.fixed_sets.iter().position(|set| set.contains(&player))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Line {
    Header {
        game_sha256: String,
        initial_state: Vec<usize>,
        schedule: Schedule,
    },
    Move(MoveRecord),
    PhaseEnd {
        phase: usize,
        state: Vec<usize>,
        movers: Vec<usize>,
        fixed: Vec<usize>,
    },
}

pub fn write_trace(trace: &Trace) -> String {
    let mut out = String::new();
    let mut push = |line: &Line| {
        out.push_str(&serde_json::to_string(line).expect("trace lines serialize"));
        out.push('\n');
    };
    push(&Line::Header {
        game_sha256: trace.game_fingerprint.clone(),
        initial_state: trace.initial_state.choices().to_vec(),
        schedule: trace.schedule.clone(),
    });
    let mut moves = trace.moves.iter().peekable();
    for (phase, state) in trace.phase_end_states.iter().enumerate() {
        while let Some(m) = moves.next_if(|m| m.phase == phase) {
            push(&Line::Move(m.clone()));
        }
        push(&Line::PhaseEnd {
            phase,
            state: state.choices().to_vec(),
            movers: trace.movers_per_phase[phase].clone(),
            fixed: trace.fixed_sets[phase].clone(),
        });
    }
    for m in moves {
        push(&Line::Move(m.clone()));
    }
    out
}

pub fn read_trace(text: &str) -> Result<Trace, GameError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).enumerate();
    let parse = |no: usize, line: &str| -> Result<Line, GameError> {
        serde_json::from_str(line)
            .map_err(|e| GameError::Malformed(format!("trace line {}: {e}", no + 1)))
    };
    let (no, first) = lines
        .next()
        .ok_or_else(|| GameError::Malformed("empty trace".into()))?;
    let Line::Header {
        game_sha256,
        initial_state,
        schedule,
    } = parse(no, first)?
    else {
        return Err(GameError::Malformed(
            "trace must start with a header line".into(),
        ));
    };
    let mut trace = Trace {
        game_fingerprint: game_sha256,
        initial_state: State::new(initial_state),
        schedule,
        moves: Vec::new(),
        phase_end_states: Vec::new(),
        movers_per_phase: Vec::new(),
        fixed_sets: Vec::new(),
    };
    for (no, line) in lines {
        match parse(no, line)? {
            Line::Header { .. } => {
                return Err(GameError::Malformed(format!(
                    "trace line {}: second header",
                    no + 1
                )))
            }
            Line::Move(m) => trace.moves.push(m),
            Line::PhaseEnd {
                phase,
                state,
                movers,
                fixed,
            } => {
                if phase != trace.phase_end_states.len() {
                    return Err(GameError::Malformed(format!(
                        "trace line {}: phase {phase} out of order",
                        no + 1
                    )));
                }
                trace.phase_end_states.push(State::new(state));
                trace.movers_per_phase.push(movers);
                trace.fixed_sets.push(fixed);
            }
        }
    }
    Ok(trace)
}
