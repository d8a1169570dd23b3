use super::schedule::{check_norm_order, eoe_explore_prob, BernoulliScheduler, SharedSeed};
use super::{check_feedback, Learner, LearnerError};
use crate::game::Policy;

/// Explore-or-exploit wrapper turning an average-iterate learner into a
/// last-iterate one.
///
/// Each round a shared-seed Bernoulli with probability `t^(-p/(2+p))` decides
/// between running one step of the inner learner (explore) and playing its
/// current output (exploit). Exploit losses are discarded. Two wrappers built
/// with the same seed and `p` make the same choice every round.
#[derive(Debug, Clone)]
pub struct Eoe<L> {
    inner: L,
    p: f64,
    scheduler: BernoulliScheduler,
    t: u64,
    pending: Option<bool>,
    exploit_policy: Policy,
    explore_rounds: u64,
}

impl<L: Learner> Eoe<L> {
    pub fn new(inner: L, p: f64, seed: SharedSeed) -> Result<Self, LearnerError> {
        check_norm_order(p)?;
        let exploit_policy = inner.output();
        Ok(Self {
            inner,
            p,
            scheduler: BernoulliScheduler::new(seed),
            t: 0,
            pending: None,
            exploit_policy,
            explore_rounds: 0,
        })
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }

    pub fn norm_order(&self) -> f64 {
        self.p
    }

    /// Rounds started so far.
    pub fn rounds(&self) -> u64 {
        self.t
    }

    /// Explore rounds so far, including a pending one.
    pub fn explore_rounds(&self) -> u64 {
        self.explore_rounds
    }

    /// Whether the current round explores; `None` before the first `act`.
    pub fn exploring(&self) -> Option<bool> {
        self.pending
    }

    pub fn scheduler(&self) -> &BernoulliScheduler {
        &self.scheduler
    }
}

impl<L: Learner> Learner for Eoe<L> {
    fn num_actions(&self) -> usize {
        self.inner.num_actions()
    }

    fn act(&mut self) -> &Policy {
        let explore = match self.pending {
            Some(explore) => explore,
            None => {
                self.t += 1;
                let prob = eoe_explore_prob(self.t, self.p).expect("validated at construction");
                let explore = self.scheduler.step(prob).expect("probability in [0, 1]");
                if explore {
                    self.explore_rounds += 1;
                } else {
                    self.exploit_policy = self.inner.output();
                }
                self.pending = Some(explore);
                explore
            }
        };
        if explore {
            self.inner.act()
        } else {
            &self.exploit_policy
        }
    }

    fn observe(&mut self, action: usize, loss: f64) -> Result<(), LearnerError> {
        match self.pending.take() {
            None => Err(LearnerError::ObserveBeforeAct),
            Some(true) => self.inner.observe(action, loss),
            Some(false) => check_feedback(self.inner.num_actions(), action, loss),
        }
    }

    fn output(&self) -> Policy {
        self.inner.output()
    }

    fn mirror_iterate(&self) -> Option<Policy> {
        self.inner.mirror_iterate()
    }
}

/// Rate guaranteed by the wrapper at round `t`:
/// `2^(1/p) * ((p_t)^(1/p) + g(r_t))` with `r_t = floor(sum_{k<=t} p_k)`.
pub fn eoe_guaranteed_rate(t: u64, p: f64, g: impl Fn(u64) -> f64) -> Result<f64, LearnerError> {
    check_norm_order(p)?;
    let mut sum = 0.0;
    for k in 1..=t {
        sum += eoe_explore_prob(k, p)?;
    }
    let p_t = eoe_explore_prob(t, p)?;
    let r_t = sum.floor() as u64;
    Ok(2f64.powf(1.0 / p) * (p_t.powf(1.0 / p) + g(r_t)))
}
