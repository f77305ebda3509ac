use alloc::string::String;

use thiserror::Error;

use crate::data::MatchId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("roster must have exactly 5 distinct players, got {0}")]
    RosterSize(usize),
    #[error("roster contains a duplicated player")]
    DuplicatePlayer,
    #[error("a team cannot play itself")]
    SelfMatch,
    #[error("duplicate match id {0:?}")]
    DuplicateMatch(MatchId),
    #[error("unknown match id {0:?}")]
    UnknownMatch(MatchId),
    #[error("dataset has {have} records, need at least {need}")]
    DatasetTooSmall { have: usize, need: usize },
    #[error("probability {0} is outside (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("draw margin must be positive, got {0}")]
    NonPositiveMargin(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("volatility iteration did not converge in {0} steps")]
    VolatilityDiverged(usize),
    #[error("{af} is undefined for the {emulator} emulator")]
    InapplicablePairing { emulator: &'static str, af: &'static str },
    #[error("evaluation set has no decisive (non-draw) matches")]
    NoDecisiveMatches,
    #[error("training budget {budget} exceeds pool of {pool} matches")]
    BudgetExceedsPool { budget: usize, pool: usize },
    #[error("kernel matrix is not positive definite even with jitter {0:e}")]
    CholeskyFailed(f64),
}
