use super::fixed::FixedLearner;
use super::regexp3::RegExp3;
use super::schedule::{doubling_prob, doubling_schedule, BernoulliScheduler, SharedSeed};
use super::{Learner, LearnerError, Side};
use crate::game::Policy;

/// Horizon-free wrapper around [`RegExp3`].
///
/// Loop `i` lasts `T_i` rounds. At round `j` of the loop a shared-seed
/// Bernoulli with probability `min(1, exp(j / S_i) / T_i)` picks the instance
/// tuned for `T_i`; otherwise the previous instance plays and keeps learning
/// on its own clock. The instance before loop 1 plays uniformly.
pub struct Doubling {
    side: Side,
    dims: (usize, usize),
    scheduler: BernoulliScheduler,
    loop_index: u32,
    loop_len: u64,
    // Rounds started in the current loop.
    within: u64,
    previous: Box<dyn Learner>,
    current: RegExp3,
    pending: Option<bool>,
    last_choice: bool,
}

impl Doubling {
    pub fn new(side: Side, dims: (usize, usize), seed: SharedSeed) -> Result<Self, LearnerError> {
        let (loop_len, _) = doubling_schedule(1)?;
        Ok(Self {
            side,
            dims,
            scheduler: BernoulliScheduler::new(seed),
            loop_index: 1,
            loop_len,
            within: 0,
            previous: Box::new(FixedLearner::uniform(side.actions(dims))),
            current: RegExp3::for_horizon(side, dims, loop_len)?,
            pending: None,
            last_choice: false,
        })
    }

    pub fn loop_index(&self) -> u32 {
        self.loop_index
    }

    /// Rounds started in the current loop.
    pub fn within_loop(&self) -> u64 {
        self.within
    }

    /// Whether the most recent round used the newest instance.
    pub fn chose_current(&self) -> bool {
        self.last_choice
    }

    pub fn current(&self) -> &RegExp3 {
        &self.current
    }

    fn advance_loop(&mut self) -> Result<(), LearnerError> {
        let next = self.loop_index + 1;
        let (loop_len, _) = doubling_schedule(next)?;
        let fresh = RegExp3::for_horizon(self.side, self.dims, loop_len)?;
        let old = std::mem::replace(&mut self.current, fresh);
        self.previous = Box::new(old);
        self.loop_index = next;
        self.loop_len = loop_len;
        self.within = 0;
        self.scheduler.reset();
        Ok(())
    }
}

impl Learner for Doubling {
    fn num_actions(&self) -> usize {
        self.current.num_actions()
    }

    fn act(&mut self) -> &Policy {
        let choice = match self.pending {
            Some(choice) => choice,
            None => {
                self.within += 1;
                let prob = doubling_prob(self.loop_index, self.within).expect("round within loop");
                let choice = self.scheduler.step(prob).expect("probability in [0, 1]");
                self.pending = Some(choice);
                self.last_choice = choice;
                choice
            }
        };
        if choice {
            self.current.act()
        } else {
            self.previous.act()
        }
    }

    fn observe(&mut self, action: usize, loss: f64) -> Result<(), LearnerError> {
        let choice = self.pending.take().ok_or(LearnerError::ObserveBeforeAct)?;
        if choice {
            self.current.observe(action, loss)?;
        } else {
            self.previous.observe(action, loss)?;
        }
        if self.within == self.loop_len {
            self.advance_loop()?;
        }
        Ok(())
    }

    /// The policy of the instance used most recently.
    fn output(&self) -> Policy {
        if self.last_choice {
            self.current.output()
        } else {
            self.previous.output()
        }
    }

    fn mirror_iterate(&self) -> Option<Policy> {
        if self.last_choice {
            self.current.mirror_iterate()
        } else {
            self.previous.mirror_iterate()
        }
    }
}

impl std::fmt::Debug for Doubling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Doubling")
            .field("side", &self.side)
            .field("loop_index", &self.loop_index)
            .field("within", &self.within)
            .finish_non_exhaustive()
    }
}
