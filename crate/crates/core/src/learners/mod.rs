//! Per-player learners under bandit feedback.
//!
//! Every learner implements [`Learner`]: `act` returns the policy to sample
//! from this round, `observe` receives the learner's own sampled action and
//! the scalar loss, and `output` returns the current recommendation. Nothing
//! in the contract carries the opponent's action or state.

mod doubling;
mod eoe;
mod estimators;
mod exp3ix;
mod fixed;
mod regexp3;
mod schedule;
mod spec;

pub use doubling::Doubling;
pub use eoe::{eoe_guaranteed_rate, Eoe};
pub use estimators::{exp3ix_estimate, importance_estimate, PROB_FLOOR};
pub use exp3ix::Exp3Ix;
pub use fixed::FixedLearner;
pub use regexp3::{regexp3_descent, regexp3_mix, RegExp3};
pub use schedule::{
    doubling_prob, doubling_schedule, eoe_explore_prob, exp3ix_rates, regexp3_params, shared_seed_bernoulli,
    BernoulliScheduler, RegExp3Params, SharedSeed,
};
pub use spec::LearnerSpec;

use thiserror::Error;

use crate::game::{GameError, Policy};

/// Which player a learner controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Minimizes the loss.
    Min,
    /// Maximizes the loss; learns from `1 - loss`.
    Max,
}

impl Side {
    /// The loss as experienced by this side.
    pub fn effective_loss(self, loss: f64) -> f64 {
        match self {
            Side::Min => loss,
            Side::Max => 1.0 - loss,
        }
    }

    /// Action count of this side in an `a x b` game.
    pub fn actions(self, dims: (usize, usize)) -> usize {
        match self {
            Side::Min => dims.0,
            Side::Max => dims.1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnerError {
    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },
    #[error("loss {0} outside [0, 1]")]
    LossOutOfRange(f64),
    #[error("action {action} out of range for {actions} actions")]
    ActionOutOfRange { action: usize, actions: usize },
    #[error("observe() called before act()")]
    ObserveBeforeAct,
    #[error("sampled action {0} has zero probability")]
    ZeroProbability(usize),
    #[error("invalid learner specification: {0}")]
    Spec(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Sequential per-player learner.
pub trait Learner: Send {
    fn num_actions(&self) -> usize;

    /// Policy to sample from this round. Calling it twice in one round
    /// returns the same policy.
    fn act(&mut self) -> &Policy;

    /// Own sampled action and realized loss in `[0, 1]` for the current round.
    fn observe(&mut self, action: usize, loss: f64) -> Result<(), LearnerError>;

    /// Current recommended policy, possibly distinct from `act`.
    fn output(&self) -> Policy;

    /// Mirror iterate before regularization, for learners that keep one.
    fn mirror_iterate(&self) -> Option<Policy> {
        None
    }
}

pub(crate) fn check_feedback(actions: usize, action: usize, loss: f64) -> Result<(), LearnerError> {
    if action >= actions {
        return Err(LearnerError::ActionOutOfRange { action, actions });
    }
    if !(0.0..=1.0).contains(&loss) {
        return Err(LearnerError::LossOutOfRange(loss));
    }
    Ok(())
}
