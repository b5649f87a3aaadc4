//! Instance generators: the tight lower-bound family and seeded random games.

mod lower_bound;
mod random;

pub use lower_bound::{gen_lower_bound, phi_rational, LowerBoundBundle};
pub use random::{gen_random, RandomParams, SplitMix64};
