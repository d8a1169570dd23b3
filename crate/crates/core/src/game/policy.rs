use super::GameError;
use crate::numerics::log_sum_exp;

/// Absolute tolerance on `sum(probs) == 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A mixed policy: a point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    probs: Vec<f64>,
}

impl Policy {
    /// Validates nonnegativity and normalization.
    pub fn new(probs: Vec<f64>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidPolicy("empty policy".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(GameError::InvalidPolicy(format!("entry {p} is not a nonnegative real")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(GameError::InvalidPolicy(format!("entries sum to {sum}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform policy needs at least one action");
        Self { probs: vec![1.0 / k as f64; k] }
    }

    pub fn point_mass(k: usize, action: usize) -> Self {
        assert!(action < k, "action {action} out of range for {k} actions");
        let mut probs = vec![0.0; k];
        probs[action] = 1.0;
        Self { probs }
    }

    /// Normalized `exp(log_weights)` computed with log-sum-exp.
    pub fn from_log_weights(log_weights: &[f64]) -> Self {
        let mut p = Self { probs: vec![0.0; log_weights.len()] };
        p.set_from_log_weights(log_weights);
        p
    }

    /// In-place variant of [`Policy::from_log_weights`]; returns the normalizer.
    pub fn set_from_log_weights(&mut self, log_weights: &[f64]) -> f64 {
        assert!(!log_weights.is_empty());
        let lse = log_sum_exp(log_weights);
        self.probs.resize(log_weights.len(), 0.0);
        for (p, &lw) in self.probs.iter_mut().zip(log_weights) {
            *p = (lw - lse).exp();
        }
        lse
    }

    /// Divides by the sum. Panics on a nonpositive or non-finite total.
    pub fn from_unnormalized(mut weights: Vec<f64>) -> Self {
        let sum: f64 = weights.iter().sum();
        assert!(sum.is_finite() && sum > 0.0, "cannot normalize weights summing to {sum}");
        for w in &mut weights {
            *w /= sum;
        }
        Self { probs: weights }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, action: usize) -> f64 {
        self.probs[action]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    /// Checks the policy invariants; used in tests and debug assertions.
    pub fn is_valid(&self) -> bool {
        let sum: f64 = self.probs.iter().sum();
        self.probs.iter().all(|p| p.is_finite() && *p >= 0.0) && (sum - 1.0).abs() <= NORMALIZATION_TOL
    }

    pub fn l1_distance(&self, other: &Policy) -> f64 {
        assert_eq!(self.len(), other.len());
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Samples an action by inverse CDF from a uniform draw in `[0, 1)`.
    pub fn sample_with(&self, uniform: f64) -> usize {
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                last_positive = i;
                acc += p;
                if uniform < acc {
                    return i;
                }
            }
        }
        // Rounding left a sliver above the cumulative sum.
        last_positive
    }
}

/// A pair of policies, one per player.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub min_policy: Policy,
    pub max_policy: Policy,
}

impl Profile {
    pub fn new(min_policy: Policy, max_policy: Policy) -> Self {
        Self { min_policy, max_policy }
    }

    pub fn uniform(a: usize, b: usize) -> Self {
        Self::new(Policy::uniform(a), Policy::uniform(b))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.min_policy.len(), self.max_policy.len())
    }

    pub fn l1_distance(&self, other: &Profile) -> f64 {
        self.min_policy.l1_distance(&other.min_policy) + self.max_policy.l1_distance(&other.max_policy)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.min_policy.is_strictly_positive() && self.max_policy.is_strictly_positive()
    }
}
