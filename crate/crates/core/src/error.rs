use thiserror::Error;

/// Errors raised while building, parsing or evaluating a game.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("degree must be at least 1")]
    InvalidDegree,
    #[error("game has no players")]
    NoPlayers,
    #[error("resource {resource}: coefficient a_{index} is negative")]
    NegativeCoefficient { resource: usize, index: usize },
    #[error("resource {resource}: polynomial has no coefficients")]
    EmptyPolynomial { resource: usize },
    #[error("resource {resource}: nonzero coefficient above declared degree {degree}")]
    DegreeMismatch { resource: usize, degree: u32 },
    #[error("player {player}: weight must be positive")]
    NonPositiveWeight { player: usize },
    #[error("player {player}: no strategies")]
    NoStrategies { player: usize },
    #[error("player {player}, strategy {strategy}: empty strategy")]
    EmptyStrategy { player: usize, strategy: usize },
    #[error("player {player}, strategy {strategy}: resource {resource} listed twice")]
    DuplicateResource {
        player: usize,
        strategy: usize,
        resource: usize,
    },
    #[error("player {player}, strategy {strategy}: resource index {resource} out of range")]
    ResourceOutOfRange {
        player: usize,
        strategy: usize,
        resource: usize,
    },
    #[error("state has {got} entries, game has {expected} players")]
    StateLength { expected: usize, got: usize },
    #[error("player {player}: strategy index {strategy} out of range")]
    StrategyOutOfRange { player: usize, strategy: usize },
    #[error("player index {0} out of range")]
    PlayerOutOfRange(usize),
    #[error("resource index {0} out of range")]
    ResourceIndexOutOfRange(usize),
    #[error("player set has {got} entries, game has {expected} players")]
    GroupLength { expected: usize, got: usize },
    #[error("negative load passed to potential")]
    NegativeLoad,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("initial state has zero maximum cost; it is trivially an equilibrium")]
    AlreadyZero,
    #[error(
        "player {player} can reach zero cost against the empty profile; phase count undefined"
    )]
    ZeroMinCost { player: usize },
    #[error("p override {p} must be at least d + 2 = {min}")]
    InvalidOverride { p: u64, min: u64 },
    #[error("player {player} has weight below 1; normalize the game first")]
    NotNormalized { player: usize },
    #[error("phase {phase} exceeded its move budget ({budget})")]
    MoveBudgetExceeded { phase: usize, budget: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("Lambert W is only defined here for nonnegative arguments, got {0}")]
    NegativeArgument(f64),
    #[error("degree must be at least 1")]
    InvalidDegree,
    #[error("rho must be at least 1, got {0}")]
    InvalidRho(f64),
    #[error("mu must lie in {expected}, got {got}")]
    InvalidMu { got: f64, expected: &'static str },
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("precision of {0} digits is too low (need at least 10)")]
    PrecisionTooLow(u32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("state space of {count} states exceeds cap {cap}")]
    StateSpaceTooLarge { count: String, cap: u64 },
    #[error("invalid rho: {0}")]
    InvalidRho(String),
    #[error("no state is a rho-equilibrium")]
    NoEquilibrium,
    #[error("trace does not match game: {0}")]
    TraceMismatch(String),
}
