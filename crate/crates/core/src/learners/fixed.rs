use super::{check_feedback, Learner, LearnerError};
use crate::game::Policy;

/// Plays a fixed policy forever and ignores feedback.
#[derive(Debug, Clone)]
pub struct FixedLearner {
    policy: Policy,
}

impl FixedLearner {
    pub fn new(policy: Policy) -> Self {
        Self { policy }
    }

    pub fn uniform(k: usize) -> Self {
        Self::new(Policy::uniform(k))
    }
}

impl Learner for FixedLearner {
    fn num_actions(&self) -> usize {
        self.policy.len()
    }

    fn act(&mut self) -> &Policy {
        &self.policy
    }

    fn observe(&mut self, action: usize, loss: f64) -> Result<(), LearnerError> {
        check_feedback(self.policy.len(), action, loss)
    }

    fn output(&self) -> Policy {
        self.policy.clone()
    }
}
