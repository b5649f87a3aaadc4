//! JSON instance files.
//!
//! ```json
//! {
//!   "degree": 1,
//!   "resources": [ { "coeffs": ["0", "1"] } ],
//!   "players":  [ { "weight": "3/2", "strategies": [[0]] } ],
//!   "initial_state": [0]
//! }
//! ```
//!
//! Rationals are strings in lowest terms; unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::GameError;
use crate::game::{CostPolynomial, Game, PlayerSpec, State};
use crate::rational::{self, Rational};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResourceDoc {
    #[serde(with = "rational::serde_str_vec")]
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlayerDoc {
    #[serde(with = "rational::serde_str")]
    weight: Rational,
    strategies: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    degree: u32,
    resources: Vec<ResourceDoc>,
    players: Vec<PlayerDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_state: Option<Vec<usize>>,
}

/// A parsed instance file: the game and an optional starting state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub game: Game,
    pub initial_state: Option<State>,
}

impl Instance {
    /// The declared initial state, or strategy 0 for everyone.
    pub fn start(&self) -> State {
        self.initial_state
            .clone()
            .unwrap_or_else(|| self.game.first_state())
    }
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance, GameError> {
    let doc: InstanceDoc =
        serde_json::from_slice(bytes).map_err(|e| GameError::Malformed(e.to_string()))?;
    let resources = doc
        .resources
        .into_iter()
        .enumerate()
        .map(|(e, r)| {
            CostPolynomial::new(r.coeffs).map_err(|err| match err {
                GameError::NegativeCoefficient { index, .. } => {
                    GameError::NegativeCoefficient { resource: e, index }
                }
                GameError::EmptyPolynomial { .. } => GameError::EmptyPolynomial { resource: e },
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let players = doc
        .players
        .into_iter()
        .map(|p| PlayerSpec::new(p.weight, p.strategies))
        .collect();
    let game = Game::new(doc.degree, resources, players)?;
    let initial_state = doc.initial_state.map(|c| game.state(c)).transpose()?;
    Ok(Instance {
        game,
        initial_state,
    })
}

/// Parses an instance file, discarding any initial state.
pub fn parse_game(bytes: &[u8]) -> Result<Game, GameError> {
    parse_instance(bytes).map(|i| i.game)
}

fn to_doc(game: &Game, initial_state: Option<&State>) -> InstanceDoc {
    InstanceDoc {
        degree: game.degree(),
        resources: game
            .resources()
            .iter()
            .map(|f| ResourceDoc {
                coeffs: f.coeffs().to_vec(),
            })
            .collect(),
        players: game
            .players()
            .iter()
            .map(|p| PlayerDoc {
                weight: p.weight.clone(),
                strategies: p.strategies.clone(),
            })
            .collect(),
        initial_state: initial_state.map(|s| s.choices().to_vec()),
    }
}

/// Pretty-printed instance JSON (trailing newline included).
pub fn serialize_instance(game: &Game, initial_state: Option<&State>) -> String {
    let mut out = serde_json::to_string_pretty(&to_doc(game, initial_state))
        .expect("instance documents always serialize");
    out.push('\n');
    out
}

pub fn serialize_game(game: &Game) -> String {
    serialize_instance(game, None)
}

/// SHA-256 of the compact canonical JSON of the game (no initial state).
pub fn fingerprint(game: &Game) -> String {
    let compact = serde_json::to_vec(&to_doc(game, None)).expect("serializable");
    hex::encode(Sha256::digest(&compact))
}

/// States are stored as a bare JSON array of strategy indices.
pub fn parse_state(game: &Game, bytes: &[u8]) -> Result<State, GameError> {
    let choices: Vec<usize> =
        serde_json::from_slice(bytes).map_err(|e| GameError::Malformed(e.to_string()))?;
    game.state(choices)
}

pub fn serialize_state(state: &State) -> String {
    let mut out = serde_json::to_string(state.choices()).expect("serializable");
    out.push('\n');
    out
}
