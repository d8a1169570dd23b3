//! Episode runner, Monte Carlo replications and rate estimation.

mod csv_io;
mod episode;
mod lower_bound;
mod monte_carlo;
mod seeds;
mod stats;

pub use csv_io::{read_curve_csv, read_trace_csv, write_curve_csv, write_trace_csv, CURVE_HEADER, TRACE_HEADER};
pub use episode::{
    kl_to_regularized_star, run_episode, run_episode_from_specs, shared_seed_for, Checkpoint, Diagnostics,
    EpisodeTrace, RoundRecord,
};
pub use lower_bound::{kl_budget, lower_bound_epsilon, lower_bound_experiment, KlBudget, LowerBoundReport};
pub use monte_carlo::{monte_carlo_checkpoints, monte_carlo_lp, run_replications, EgTarget, McConfig};
pub use seeds::{replication_seed, splitmix64};
pub use stats::{
    fit_rate, geometric_checkpoints, geometric_grid, lp_estimate, mean_and_stderr, CurvePoint, RateCurve, RateFit,
};

use thiserror::Error;

use crate::game::GameError;
use crate::learners::LearnerError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error("learner has {got} actions, game side has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("trace lacks {0} diagnostics")]
    MissingDiagnostics(&'static str),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("KL budget {budget} exceeds analytic bound {bound}")]
    BudgetExceeded { budget: f64, bound: f64 },
    #[error("malformed CSV: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
