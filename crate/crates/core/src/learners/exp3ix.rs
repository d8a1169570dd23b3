use super::schedule::exp3ix_rates;
use super::{check_feedback, Learner, LearnerError, Side};
use crate::game::Policy;

/// Anytime EXP3 with implicit exploration.
///
/// Plays `pi_t(a) ∝ exp(-eta_t * sum_{s<t} lhat_s(a))` with the current rate
/// applied to the whole cumulative estimate. The output is the arithmetic
/// mean of the played policy vectors.
#[derive(Debug, Clone)]
pub struct Exp3Ix {
    side: Side,
    t: u64,
    cum_est_loss: Vec<f64>,
    policy_sum: Vec<f64>,
    scratch: Vec<f64>,
    policy: Policy,
    gamma: f64,
    pending: bool,
}

impl Exp3Ix {
    pub fn new(side: Side, k: usize) -> Result<Self, LearnerError> {
        exp3ix_rates(1, k)?;
        Ok(Self {
            side,
            t: 0,
            cum_est_loss: vec![0.0; k],
            policy_sum: vec![0.0; k],
            scratch: vec![0.0; k],
            policy: Policy::uniform(k),
            gamma: 0.0,
            pending: false,
        })
    }

    /// Completed rounds.
    pub fn rounds(&self) -> u64 {
        self.t
    }

    pub fn cumulative_estimates(&self) -> &[f64] {
        &self.cum_est_loss
    }
}

impl Learner for Exp3Ix {
    fn num_actions(&self) -> usize {
        self.policy.len()
    }

    fn act(&mut self) -> &Policy {
        if !self.pending {
            let (eta, gamma) = exp3ix_rates(self.t + 1, self.policy.len()).expect("validated at construction");
            for (s, c) in self.scratch.iter_mut().zip(&self.cum_est_loss) {
                *s = -eta * c;
            }
            self.policy.set_from_log_weights(&self.scratch);
            self.gamma = gamma;
            self.pending = true;
        }
        &self.policy
    }

    fn observe(&mut self, action: usize, loss: f64) -> Result<(), LearnerError> {
        if !self.pending {
            return Err(LearnerError::ObserveBeforeAct);
        }
        check_feedback(self.policy.len(), action, loss)?;
        let est = self.side.effective_loss(loss) / (self.policy.prob(action) + self.gamma);
        self.cum_est_loss[action] += est;
        for (s, p) in self.policy_sum.iter_mut().zip(self.policy.probs()) {
            *s += p;
        }
        self.t += 1;
        self.pending = false;
        Ok(())
    }

    fn output(&self) -> Policy {
        if self.t == 0 {
            return Policy::uniform(self.policy.len());
        }
        let n = self.t as f64;
        Policy::from_unnormalized(self.policy_sum.iter().map(|s| s / n).collect())
    }
}
