//! The 2x2 Bernoulli family used for lower-bound accounting.
//!
//! ```text
//! M(eps) = [ 2/3 - eps   1/3 + eps ]
//!          [ 1/3         2/3       ]
//! ```
//!
//! For every `eps` in `[-1/12, 1/12]` the max-player's unique minimax policy is
//! `(1/2, 1/2)` and the value is `1/2`, while the min-player's minimax policy
//! depends on the sign of `eps`.

use super::{GameError, LossMode, MatrixGame};

pub const HARD_EPSILON_MAX: f64 = 1.0 / 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardInstance {
    epsilon: f64,
}

impl HardInstance {
    pub fn new(epsilon: f64) -> Result<Self, GameError> {
        if !epsilon.is_finite() || epsilon.abs() > HARD_EPSILON_MAX {
            return Err(GameError::OutOfDomain { value: epsilon, domain: "[-1/12, 1/12]" });
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn game(&self) -> MatrixGame {
        let e = self.epsilon;
        MatrixGame::from_flat(2, 2, vec![2.0 / 3.0 - e, 1.0 / 3.0 + e, 1.0 / 3.0, 2.0 / 3.0], LossMode::Bernoulli)
            .expect("hard instance entries lie in [0, 1]")
    }
}

pub fn hard_instance(epsilon: f64) -> Result<MatrixGame, GameError> {
    Ok(HardInstance::new(epsilon)?.game())
}

/// Bernoulli means of the min-player's two actions under `M(eps)` when the
/// max-player plays `(1/2 + delta, 1/2 - delta)`.
pub fn reward_vector_law(epsilon: f64, delta: f64) -> Result<(f64, f64), GameError> {
    HardInstance::new(epsilon)?;
    if !delta.is_finite() || delta.abs() > 0.5 {
        return Err(GameError::OutOfDomain { value: delta, domain: "[-1/2, 1/2]" });
    }
    let first = 0.5 + delta / 3.0 - 2.0 * delta * epsilon;
    let second = 0.5 - delta / 3.0;
    debug_assert!((1.0 / 6.0..=5.0 / 6.0).contains(&first));
    debug_assert!((1.0 / 6.0..=5.0 / 6.0).contains(&second));
    Ok((first, second))
}
