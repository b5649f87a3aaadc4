//! Weighted polynomial congestion games.
//!
//! * [`game`] and [`format`]: exact game model and JSON instances.
//! * [`potential`]: the approximate potential and its group variants.
//! * [`dynamics`]: best responses and the phased best-response algorithm that
//!   computes `d^{d+o(d)}`-approximate pure equilibria.
//! * [`analysis`]: floating-point price-of-anarchy quantities (generalized
//!   golden ratio, Lambert W bound, smoothness constants) and inequality checks.
//! * [`instances`]: the tight lower-bound family and seeded random games.
//! * [`verify`]: equilibrium factors, brute-force PoA and trace audits.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod game;
pub mod instances;
pub mod potential;
pub mod rational;
pub mod verify;

pub use error::{AnalysisError, DynamicsError, GameError, InstanceError, VerifyError};
pub use format::{parse_game, parse_instance, serialize_game, serialize_instance, Instance};
pub use game::{CostPolynomial, Game, PlayerSet, PlayerSpec, State};
pub use rational::{parse_rational, Rational};
