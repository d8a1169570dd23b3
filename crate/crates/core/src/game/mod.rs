//! Matrix-game model: policies, exploitability, divergences, equilibrium oracles
//! and the 2x2 hard-instance family.

mod divergence;
mod hard;
mod matrix;
mod nash;
mod policy;
mod regularized;

pub use divergence::{bernoulli_kl, bregman_distance, kl_divergence};
pub use hard::{hard_instance, reward_vector_law, HardInstance, HARD_EPSILON_MAX};
pub use matrix::{expected_loss, exploitability_gap, LossMode, MatrixGame};
pub use nash::{nash_value, nash_value_with_cap, solve_2x2, NASH_DEFAULT_TOL};
pub use policy::{Policy, Profile, NORMALIZATION_TOL};
pub use regularized::{regularized_equilibrium, RegularizedGame, REG_EQ_DEFAULT_TOL, REG_EQ_MAX_ITER};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value {value} outside domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
    #[error("policy has a zero entry where a strictly positive one is required")]
    ZeroEntry,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}
