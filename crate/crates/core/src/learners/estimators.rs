//! Bandit loss estimators.

use super::{LearnerError, Side};
use crate::game::Policy;

/// Division guard for importance weights. Never applied to policies themselves.
pub const PROB_FLOOR: f64 = 1e-300;

/// Importance-sampling estimate of the full loss vector from one sample:
/// `loss / mu(a)` (min side) or `(1 - loss) / nu(b)` (max side) at the sampled
/// coordinate, zero elsewhere.
pub fn importance_estimate(loss: f64, action: usize, policy: &Policy, side: Side) -> Result<Vec<f64>, LearnerError> {
    super::check_feedback(policy.len(), action, loss)?;
    let prob = policy.prob(action);
    if prob <= 0.0 {
        return Err(LearnerError::ZeroProbability(action));
    }
    let mut est = vec![0.0; policy.len()];
    est[action] = side.effective_loss(loss) / prob;
    Ok(est)
}

/// Implicit-exploration estimate: the sampled coordinate is divided by
/// `pi(a) + gamma` instead of `pi(a)`.
pub fn exp3ix_estimate(
    loss: f64,
    action: usize,
    policy: &Policy,
    gamma: f64,
    side: Side,
) -> Result<Vec<f64>, LearnerError> {
    super::check_feedback(policy.len(), action, loss)?;
    if !(gamma >= 0.0) {
        return Err(LearnerError::Domain { what: "gamma", value: gamma });
    }
    let denom = policy.prob(action) + gamma;
    if denom <= 0.0 {
        return Err(LearnerError::ZeroProbability(action));
    }
    let mut est = vec![0.0; policy.len()];
    est[action] = side.effective_loss(loss) / denom;
    Ok(est)
}

/// Guarded scalar weight used on the hot path; reports whether the floor fired.
#[inline]
pub(crate) fn guarded_weight(effective_loss: f64, prob: f64) -> (f64, bool) {
    if prob < PROB_FLOOR {
        (effective_loss / PROB_FLOOR, true)
    } else {
        (effective_loss / prob, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::MatrixGame;

    #[test]
    fn importance_examples() {
        let mu = Policy::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(importance_estimate(1.0, 0, &mu, Side::Min).unwrap(), vec![4.0, 0.0]);
        let nu = Policy::uniform(2);
        let est = importance_estimate(0.3, 1, &nu, Side::Max).unwrap();
        assert_eq!(est[0], 0.0);
        assert!((est[1] - 1.4).abs() < 1e-15);
        assert_eq!(importance_estimate(0.0, 1, &mu, Side::Min).unwrap(), vec![0.0, 0.0]);
        let point = Policy::point_mass(2, 0);
        assert_eq!(importance_estimate(1.0, 1, &point, Side::Min), Err(LearnerError::ZeroProbability(1)));
        assert!(importance_estimate(1.5, 0, &mu, Side::Min).is_err());
        assert!(importance_estimate(0.5, 2, &mu, Side::Min).is_err());
    }

    #[test]
    fn ix_example() {
        let pi = Policy::uniform(2);
        let est = exp3ix_estimate(1.0, 0, &pi, 0.25, Side::Min).unwrap();
        assert!((est[0] - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(est[1], 0.0);
    }

    // Exact expectation over the finite outcome space (a, b, loss in {0, 1}).
    fn expected_estimates(game: &MatrixGame, mu: &Policy, nu: &Policy) -> (Vec<f64>, Vec<f64>) {
        let (a_n, b_n) = game.dims();
        let mut e_min = vec![0.0; a_n];
        let mut e_max = vec![0.0; b_n];
        for a in 0..a_n {
            for b in 0..b_n {
                let m = game.entry(a, b);
                for &(loss, pl) in &[(1.0, m), (0.0, 1.0 - m)] {
                    let w = mu.prob(a) * nu.prob(b) * pl;
                    let em = importance_estimate(loss, a, mu, Side::Min).unwrap();
                    let ex = importance_estimate(loss, b, nu, Side::Max).unwrap();
                    for i in 0..a_n {
                        e_min[i] += w * em[i];
                    }
                    for j in 0..b_n {
                        e_max[j] += w * ex[j];
                    }
                }
            }
        }
        (e_min, e_max)
    }

    #[test]
    fn estimates_are_unbiased() {
        let game = MatrixGame::new(
            vec![vec![0.1, 0.7, 0.4], vec![0.9, 0.2, 0.5], vec![0.3, 0.6, 0.8], vec![0.05, 0.95, 0.5]],
            crate::game::LossMode::Bernoulli,
        )
        .unwrap();
        let mu = Policy::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let nu = Policy::new(vec![0.6, 0.15, 0.25]).unwrap();
        let (e_min, e_max) = expected_estimates(&game, &mu, &nu);
        let l_nu = game.loss_vector(&nu).unwrap();
        let mu_l = game.payoff_vector(&mu).unwrap();
        for (e, l) in e_min.iter().zip(&l_nu) {
            assert!((e - l).abs() < 1e-12);
        }
        for (e, l) in e_max.iter().zip(&mu_l) {
            assert!((e - (1.0 - l)).abs() < 1e-12);
        }
    }
}
