//! Error types shared across the crate.

use thiserror::Error;

/// Errors from composite ranking, scenario evaluation, population
/// generation, and bootstrap inference.
#[derive(Debug, Error)]
pub enum Error {
    #[error("score must be finite, got {0}")]
    NonFiniteScore(String),

    #[error("empty sample")]
    EmptySample,

    #[error("no survivors in sample")]
    NoSurvivors,

    #[error("quantile level must lie in the open interval (0, 1), got {0}")]
    InvalidQuantileLevel(f64),

    #[error("sentinel not below all survivor scores (sentinel {sentinel}, minimum survivor score {min_score})")]
    SentinelNotBelow { sentinel: String, min_score: String },

    #[error("arm must be 0 or 1, got {0}")]
    InvalidArm(u8),

    #[error("subject {id}: stratum {stratum} under arm {arm} implies {expected}, but the outcome disagrees")]
    StratumOutcomeMismatch {
        id: String,
        stratum: &'static str,
        arm: u8,
        expected: &'static str,
    },

    #[error("invalid scenario: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),

    #[error("scenario has no always-survivors")]
    NoAlwaysSurvivors,

    #[error("not identified without monotonicity")]
    NotIdentifiedWithoutMonotonicity,

    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("population size must be at least 1")]
    EmptyPopulation,

    #[error("arm {0} has no survivors, survivor-restricted measures are undefined")]
    ArmWithoutSurvivors(u8),

    #[error("grid step must lie in (0, 0.5] and divide 1 evenly, got {0}")]
    InvalidGridStep(f64),

    #[error("infeasible always-survivor allocation: {0}")]
    InfeasibleAllocation(String),

    #[error("resample count must be at least 1")]
    InvalidResampleCount,

    #[error("confidence level must lie in the open interval (0, 1), got {0}")]
    InvalidConfidenceLevel(f64),

    #[error("survivor-median redraw budget exhausted ({spent} redraws, budget {budget})")]
    RedrawBudgetExhausted { spent: u64, budget: u64 },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
