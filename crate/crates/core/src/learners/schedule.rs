//! Parameter schedules and the shared-seed Bernoulli scheduler.

use super::LearnerError;

/// Common uniform draw `u in [0, 1)` given to both players at construction.
///
/// This is the only randomness the two players share; it plays the role of
/// internal randomness fixed before the first round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedSeed(f64);

impl SharedSeed {
    pub fn new(u: f64) -> Result<Self, LearnerError> {
        if !(0.0..1.0).contains(&u) {
            return Err(LearnerError::Domain { what: "shared seed u", value: u });
        }
        Ok(Self(u))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// EXP3-IX rates `eta = sqrt(log K / (K t))`, `gamma = eta / 2`.
pub fn exp3ix_rates(t: u64, k: usize) -> Result<(f64, f64), LearnerError> {
    if t == 0 {
        return Err(LearnerError::Domain { what: "round t", value: 0.0 });
    }
    if k < 2 {
        return Err(LearnerError::Domain { what: "action count K", value: k as f64 });
    }
    let k = k as f64;
    let eta = (k.ln() / (k * t as f64)).sqrt();
    Ok((eta, eta / 2.0))
}

/// Exploration probability `t^(-p / (2 + p))`.
pub fn eoe_explore_prob(t: u64, p: f64) -> Result<f64, LearnerError> {
    if t == 0 {
        return Err(LearnerError::Domain { what: "round t", value: 0.0 });
    }
    check_norm_order(p)?;
    Ok((t as f64).powf(-p / (2.0 + p)))
}

pub(crate) fn check_norm_order(p: f64) -> Result<(), LearnerError> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(LearnerError::Domain { what: "norm order p", value: p });
    }
    Ok(())
}

/// Regularization and step-size schedule for a fixed horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegExp3Params {
    pub tau: f64,
}

impl RegExp3Params {
    pub fn with_tau(tau: f64) -> Result<Self, LearnerError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(LearnerError::Domain { what: "tau", value: tau });
        }
        Ok(Self { tau })
    }

    /// `eta_t = 2 / (tau (t + 1))`.
    pub fn eta(&self, t: u64) -> f64 {
        2.0 / (self.tau * (t as f64 + 1.0))
    }

    /// `tau * eta_t`, evaluated as `2 / (t + 1)` so it never exceeds one.
    pub fn tau_eta(&self, t: u64) -> f64 {
        2.0 / (t as f64 + 1.0)
    }
}

/// `tau = ((A + B) / T)^(1/4) * sqrt(2 / (log A + log B))`.
pub fn regexp3_params(a: usize, b: usize, horizon: u64) -> Result<RegExp3Params, LearnerError> {
    if a < 2 || b < 2 {
        return Err(LearnerError::Domain { what: "action count", value: a.min(b) as f64 });
    }
    if horizon == 0 {
        return Err(LearnerError::Domain { what: "horizon T", value: 0.0 });
    }
    let (af, bf) = (a as f64, b as f64);
    let tau = ((af + bf) / horizon as f64).powf(0.25) * (2.0 / (af.ln() + bf.ln())).sqrt();
    RegExp3Params::with_tau(tau)
}

/// Loop length and growth scale of loop `i`: `T_i = 32 i 2^i`, `S_i = 8 * 2^i`.
pub fn doubling_schedule(i: u32) -> Result<(u64, f64), LearnerError> {
    if i == 0 || i > 40 {
        return Err(LearnerError::Domain { what: "loop index i", value: i as f64 });
    }
    let pow = 1u64 << i;
    Ok((32 * i as u64 * pow, 8.0 * pow as f64))
}

/// Probability of playing the new instance at round `j` of loop `i`:
/// `min(1, exp(j / S_i) / T_i)`.
pub fn doubling_prob(i: u32, j: u64) -> Result<f64, LearnerError> {
    let (t_i, s_i) = doubling_schedule(i)?;
    if j == 0 || j > t_i {
        return Err(LearnerError::Domain { what: "within-loop round j", value: j as f64 });
    }
    Ok(((j as f64 / s_i).exp() / t_i as f64).min(1.0))
}

/// `floor(s_new + u) - floor(s_prev + u)` for an increment in `[0, 1]`.
pub fn shared_seed_bernoulli(seed: SharedSeed, s_prev: f64, s_new: f64) -> Result<bool, LearnerError> {
    let inc = s_new - s_prev;
    // Slack for increments produced by floating-point accumulation.
    let slack = 1e-12 * s_new.abs().max(1.0);
    if !(inc >= -slack && inc <= 1.0 + slack) {
        return Err(LearnerError::Domain { what: "probability increment", value: inc });
    }
    let u = seed.value();
    Ok((s_new + u).floor() > (s_prev + u).floor())
}

/// Running form of [`shared_seed_bernoulli`]: feeds probabilities one round at a time.
#[derive(Debug, Clone)]
pub struct BernoulliScheduler {
    seed: SharedSeed,
    cumulative: f64,
    floor_prev: f64,
}

impl BernoulliScheduler {
    pub fn new(seed: SharedSeed) -> Self {
        Self { seed, cumulative: 0.0, floor_prev: seed.value().floor() }
    }

    /// Adds `prob` to the running sum and returns whether the floor moved.
    pub fn step(&mut self, prob: f64) -> Result<bool, LearnerError> {
        if !(0.0..=1.0).contains(&prob) {
            return Err(LearnerError::Domain { what: "probability", value: prob });
        }
        let next = self.cumulative + prob;
        let floor_next = (next + self.seed.value()).floor();
        let fired = floor_next > self.floor_prev;
        self.cumulative = next;
        self.floor_prev = floor_next;
        Ok(fired)
    }

    /// Restarts the running sum, keeping the same seed.
    pub fn reset(&mut self) {
        *self = Self::new(self.seed);
    }

    pub fn cumulative(&self) -> f64 {
        self.cumulative
    }

    /// `floor(cumulative + u)`.
    pub fn floor_prev(&self) -> f64 {
        self.floor_prev
    }

    pub fn seed(&self) -> SharedSeed {
        self.seed
    }
}
