use super::estimators::guarded_weight;
use super::schedule::{regexp3_params, RegExp3Params};
use super::{check_feedback, Learner, LearnerError, Side};
use crate::game::Policy;

/// Geometric mixture `mirror^(1 - c) * anchor^c`, normalized.
pub fn regexp3_mix(mirror: &Policy, anchor: &Policy, tau_eta: f64) -> Result<Policy, LearnerError> {
    if !(0.0..=1.0).contains(&tau_eta) {
        return Err(LearnerError::Domain { what: "tau * eta", value: tau_eta });
    }
    if mirror.len() != anchor.len() {
        return Err(crate::game::GameError::DimensionMismatch { expected: mirror.len(), got: anchor.len() }.into());
    }
    if tau_eta == 1.0 {
        return Ok(anchor.clone());
    }
    if tau_eta == 0.0 {
        return Ok(mirror.clone());
    }
    let logs: Vec<f64> =
        mirror.probs().iter().zip(anchor.probs()).map(|(m, a)| (1.0 - tau_eta) * m.ln() + tau_eta * a.ln()).collect();
    Ok(Policy::from_log_weights(&logs))
}

/// Exponential-weights step `played(a) * exp(-eta * est_loss(a))`, normalized.
pub fn regexp3_descent(played: &Policy, est_loss: &[f64], eta: f64) -> Result<Policy, LearnerError> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(LearnerError::Domain { what: "eta", value: eta });
    }
    if played.len() != est_loss.len() {
        return Err(crate::game::GameError::DimensionMismatch { expected: played.len(), got: est_loss.len() }.into());
    }
    let logs: Vec<f64> = played.probs().iter().zip(est_loss).map(|(p, l)| p.ln() - eta * l).collect();
    Ok(Policy::from_log_weights(&logs))
}

/// Uncoupled regularized EXP3 with a uniform anchor.
///
/// The mirror iterate is stored as unnormalized log weights; the played policy
/// for the next round is computed as soon as a round is observed, so `act` is
/// a plain borrow.
#[derive(Debug, Clone)]
pub struct RegExp3 {
    side: Side,
    params: RegExp3Params,
    // Index of the round being played, starting at 1.
    t: u64,
    log_anchor: Vec<f64>,
    log_mirror: Vec<f64>,
    log_played: Vec<f64>,
    played: Policy,
    pending: bool,
    guard_hits: u64,
}

impl RegExp3 {
    pub fn new(side: Side, k: usize, params: RegExp3Params) -> Result<Self, LearnerError> {
        if k < 2 {
            return Err(LearnerError::Domain { what: "action count", value: k as f64 });
        }
        let log_u = -(k as f64).ln();
        let mut learner = Self {
            side,
            params,
            t: 1,
            log_anchor: vec![log_u; k],
            log_mirror: vec![log_u; k],
            log_played: vec![log_u; k],
            played: Policy::uniform(k),
            pending: false,
            guard_hits: 0,
        };
        learner.refresh_played();
        Ok(learner)
    }

    /// Learner tuned for a horizon in an `a x b` game.
    pub fn for_horizon(side: Side, dims: (usize, usize), horizon: u64) -> Result<Self, LearnerError> {
        let params = regexp3_params(dims.0, dims.1, horizon)?;
        Self::new(side, side.actions(dims), params)
    }

    pub fn tau(&self) -> f64 {
        self.params.tau
    }

    pub fn params(&self) -> RegExp3Params {
        self.params
    }

    /// Number of completed act/observe pairs.
    pub fn rounds(&self) -> u64 {
        self.t - 1
    }

    /// Times the estimator's division guard fired.
    pub fn guard_hits(&self) -> u64 {
        self.guard_hits
    }

    pub fn played(&self) -> &Policy {
        &self.played
    }

    fn refresh_played(&mut self) {
        let c = self.params.tau_eta(self.t);
        if c >= 1.0 {
            self.log_played.copy_from_slice(&self.log_anchor);
        } else {
            for ((lp, lm), la) in self.log_played.iter_mut().zip(&self.log_mirror).zip(&self.log_anchor) {
                *lp = (1.0 - c) * lm + c * la;
            }
        }
        let lse = self.played.set_from_log_weights(&self.log_played);
        for lp in &mut self.log_played {
            *lp -= lse;
        }
    }
}

impl Learner for RegExp3 {
    fn num_actions(&self) -> usize {
        self.played.len()
    }

    fn act(&mut self) -> &Policy {
        self.pending = true;
        &self.played
    }

    fn observe(&mut self, action: usize, loss: f64) -> Result<(), LearnerError> {
        if !self.pending {
            return Err(LearnerError::ObserveBeforeAct);
        }
        check_feedback(self.played.len(), action, loss)?;
        let (weight, guarded) = guarded_weight(self.side.effective_loss(loss), self.played.prob(action));
        if guarded {
            self.guard_hits += 1;
        }
        self.log_mirror.copy_from_slice(&self.log_played);
        if weight != 0.0 {
            // Use the normalized log directly so a vanishing probability stays finite.
            self.log_mirror[action] -= self.params.eta(self.t) * weight;
        }
        self.t += 1;
        self.pending = false;
        self.refresh_played();
        Ok(())
    }

    fn output(&self) -> Policy {
        self.played.clone()
    }

    fn mirror_iterate(&self) -> Option<Policy> {
        Some(Policy::from_log_weights(&self.log_mirror))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::kl_divergence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mix_examples() {
        let mirror = Policy::new(vec![0.9, 0.1]).unwrap();
        let anchor = Policy::uniform(2);
        let m = regexp3_mix(&mirror, &anchor, 0.5).unwrap();
        assert!((m.prob(0) - 0.75).abs() < 1e-15);
        assert_eq!(regexp3_mix(&mirror, &anchor, 1.0).unwrap(), anchor);
        assert_eq!(regexp3_mix(&mirror, &anchor, 0.0).unwrap(), mirror);
        assert!(regexp3_mix(&mirror, &anchor, 1.5).is_err());
    }

    #[test]
    fn mix_log_odds_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(2..6);
            let mirror = Policy::from_unnormalized((0..k).map(|_| rng.gen_range(0.01..1.0)).collect());
            let anchor = Policy::from_unnormalized((0..k).map(|_| rng.gen_range(0.01..1.0)).collect());
            let c: f64 = rng.gen();
            let m = regexp3_mix(&mirror, &anchor, c).unwrap();
            for i in 1..k {
                let lhs = (m.prob(0) / m.prob(i)).ln();
                let rhs =
                    (1.0 - c) * (mirror.prob(0) / mirror.prob(i)).ln() + c * (anchor.prob(0) / anchor.prob(i)).ln();
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn descent_examples() {
        let played = Policy::uniform(2);
        let d = regexp3_descent(&played, &[2.0, 0.0], 0.5).unwrap();
        let e = (-1f64).exp();
        assert!((d.prob(0) - e / (1.0 + e)).abs() < 1e-15);
        assert!((d.prob(0) - 0.268_941_421_369_995_1).abs() < 1e-15);
        let p = Policy::new(vec![0.2, 0.3, 0.5]).unwrap();
        let same = regexp3_descent(&p, &[0.0; 3], 0.7).unwrap();
        assert!(same.l1_distance(&p) < 1e-15);
        let shifted = regexp3_descent(&p, &[3.0; 3], 0.7).unwrap();
        assert!(shifted.l1_distance(&p) < 1e-15);
        assert!(regexp3_descent(&p, &[0.0; 3], 0.0).is_err());
    }

    #[test]
    fn first_round_is_uniform_and_counter_counts() {
        let mut l = RegExp3::for_horizon(Side::Min, (3, 2), 1000).unwrap();
        assert_eq!(l.act().probs(), Policy::uniform(3).probs());
        assert_eq!(l.output(), Policy::uniform(3));
        for n in 0..25 {
            assert_eq!(l.rounds(), n);
            l.act();
            l.observe((n % 3) as usize, 0.4).unwrap();
        }
        assert_eq!(l.rounds(), 25);
        assert_eq!(l.observe(0, 0.1), Err(LearnerError::ObserveBeforeAct));
    }

    #[test]
    fn matches_reference_updates() {
        // Replay the two closed-form steps with the free functions.
        let params = RegExp3Params::with_tau(0.3).unwrap();
        let mut l = RegExp3::new(Side::Max, 3, params).unwrap();
        let anchor = Policy::uniform(3);
        let mut mirror = Policy::uniform(3);
        let feedback = [(0, 0.2), (2, 0.9), (1, 0.0), (2, 0.5), (0, 1.0), (1, 0.7)];
        for (t, &(b, loss)) in feedback.iter().enumerate() {
            let t = t as u64 + 1;
            let played = regexp3_mix(&mirror, &anchor, params.tau_eta(t)).unwrap();
            assert!(l.act().l1_distance(&played) < 1e-13);
            assert!(l.output().l1_distance(&played) < 1e-13);
            let est = crate::learners::importance_estimate(loss, b, &played, Side::Max).unwrap();
            mirror = regexp3_descent(&played, &est, params.eta(t)).unwrap();
            l.observe(b, loss).unwrap();
            assert!(l.mirror_iterate().unwrap().l1_distance(&mirror) < 1e-13);
        }
    }

    #[test]
    fn second_order_bound_exact() {
        // E KL(mu, descent(mu, est, eta)) <= eta^2 A / 2 over all (a, loss in {0,1}).
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let k = rng.gen_range(2..6);
            let mu = Policy::from_unnormalized((0..k).map(|_| rng.gen_range(0.01..1.0)).collect());
            let means: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
            let eta: f64 = rng.gen_range(0.01..3.0);
            let mut expected = 0.0;
            for a in 0..k {
                for &(loss, pl) in &[(1.0, means[a]), (0.0, 1.0 - means[a])] {
                    let est = crate::learners::importance_estimate(loss, a, &mu, Side::Min).unwrap();
                    let next = regexp3_descent(&mu, &est, eta).unwrap();
                    expected += mu.prob(a) * pl * kl_divergence(&mu, &next);
                }
            }
            assert!(expected <= eta * eta * k as f64 / 2.0 + 1e-15);
        }
    }

    #[test]
    fn symmetric_game_keeps_uniform_mean() {
        // With a constant loss 1/2 the expected played policy stays uniform.
        // Exact expectation over all 2^n sampled-action paths.
        let params = RegExp3Params::with_tau(0.5).unwrap();
        let n = 8;
        let mut mean = [0.0; 2];
        let mut stack = vec![(RegExp3::new(Side::Min, 2, params).unwrap(), 1.0f64, 0)];
        while let Some((mut l, w, depth)) = stack.pop() {
            let p = l.act().clone();
            if depth == n {
                mean[0] += w * p.prob(0);
                mean[1] += w * p.prob(1);
                continue;
            }
            for a in 0..2 {
                let mut child = l.clone();
                child.observe(a, 0.5).unwrap();
                stack.push((child, w * p.prob(a), depth + 1));
            }
        }
        assert!((mean[0] - 0.5).abs() < 1e-12);
        assert!((mean[1] - 0.5).abs() < 1e-12);
    }
}
