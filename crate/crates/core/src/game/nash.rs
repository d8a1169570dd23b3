//! Diagnostic Nash solver for unregularized games.

use super::{exploitability_gap, GameError, LossMode, MatrixGame, Policy, Profile};
use crate::numerics::log_sum_exp;

pub const NASH_DEFAULT_TOL: f64 = 1e-6;
const NASH_MAX_ITER: usize = 10_000_000;
const NASH_STEP: f64 = 0.1;
const CHECK_EVERY: usize = 16;

/// Game value and a profile whose exploitability gap is at most `tol`.
///
/// Runs deterministic self-play of optimistic exponential weights on the exact
/// loss vectors and monitors both the last iterate and the running average,
/// returning whichever certifies `tol` first. The value is the midpoint of the
/// two best-response values, which bracket the true value.
pub fn nash_value(game: &MatrixGame, tol: f64) -> Result<(f64, Profile), GameError> {
    nash_value_with_cap(game, tol, NASH_MAX_ITER)
}

pub fn nash_value_with_cap(game: &MatrixGame, tol: f64, max_iter: usize) -> Result<(f64, Profile), GameError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(GameError::OutOfDomain { value: tol, domain: "tol > 0" });
    }
    let (a, b) = game.dims();
    let mut log_x = vec![-(a as f64).ln(); a];
    let mut log_y = vec![-(b as f64).ln(); b];
    let mut x = Policy::uniform(a);
    let mut y = Policy::uniform(b);
    let mut prev_gx = vec![0.0; a];
    let mut prev_gy = vec![0.0; b];
    let mut sum_x = vec![0.0; a];
    let mut sum_y = vec![0.0; b];
    let mut best: Option<(f64, Profile)> = None;

    for it in 0..=max_iter {
        for (s, p) in sum_x.iter_mut().zip(x.probs()) {
            *s += p;
        }
        for (s, p) in sum_y.iter_mut().zip(y.probs()) {
            *s += p;
        }
        if it % CHECK_EVERY == 0 || it == max_iter {
            let last = Profile::new(x.clone(), y.clone());
            let avg = Profile::new(Policy::from_unnormalized(sum_x.clone()), Policy::from_unnormalized(sum_y.clone()));
            for w in [last, avg] {
                let eg = exploitability_gap(game, &w)?;
                if best.as_ref().is_none_or(|(b, _)| eg < *b) {
                    best = Some((eg, w));
                }
            }
            let (eg, w) = best.as_ref().expect("set above");
            if *eg <= tol {
                return Ok((bracket_midpoint(game, w)?, w.clone()));
            }
        }
        if it == max_iter {
            break;
        }
        let gx = game.loss_vector(&y)?;
        let gy: Vec<f64> = game.payoff_vector(&x)?.into_iter().map(|v| -v).collect();
        optimistic_step(&mut log_x, &gx, &prev_gx, NASH_STEP);
        optimistic_step(&mut log_y, &gy, &prev_gy, NASH_STEP);
        x.set_from_log_weights(&log_x);
        y.set_from_log_weights(&log_y);
        prev_gx = gx;
        prev_gy = gy;
    }
    let residual = best.map_or(f64::INFINITY, |(eg, _)| eg);
    Err(GameError::NoConvergence { iterations: max_iter, residual })
}

fn optimistic_step(log_p: &mut [f64], g: &[f64], prev_g: &[f64], eta: f64) {
    for ((lp, gi), pg) in log_p.iter_mut().zip(g).zip(prev_g) {
        *lp -= eta * (2.0 * gi - pg);
    }
    let lse = log_sum_exp(log_p);
    for lp in log_p.iter_mut() {
        *lp -= lse;
    }
}

fn bracket_midpoint(game: &MatrixGame, w: &Profile) -> Result<f64, GameError> {
    let lower = game.loss_vector(&w.max_policy)?.into_iter().fold(f64::INFINITY, f64::min);
    let upper = game.payoff_vector(&w.min_policy)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(0.5 * (lower + upper))
}

/// Closed-form equilibrium of a 2x2 game: a pure saddle point when one
/// exists, otherwise the interior indifference solution.
pub fn solve_2x2(game: &MatrixGame) -> Result<(f64, Profile), GameError> {
    if game.dims() != (2, 2) {
        return Err(GameError::InvalidGame(format!("expected a 2x2 game, got {:?}", game.dims())));
    }
    for r in 0..2 {
        for c in 0..2 {
            let v = game.entry(r, c);
            let col_min = v <= game.entry(1 - r, c);
            let row_max = v >= game.entry(r, 1 - c);
            if col_min && row_max {
                return Ok((v, Profile::new(Policy::point_mass(2, r), Policy::point_mass(2, c))));
            }
        }
    }
    let (p, q, r, s) = (game.entry(0, 0), game.entry(0, 1), game.entry(1, 0), game.entry(1, 1));
    let denom = p - q - r + s;
    let mu1 = (s - r) / denom;
    let nu1 = (s - q) / denom;
    let value = (p * s - q * r) / denom;
    let mu = Policy::from_unnormalized(vec![mu1, 1.0 - mu1]);
    let nu = Policy::from_unnormalized(vec![nu1, 1.0 - nu1]);
    Ok((value, Profile::new(mu, nu)))
}

impl MatrixGame {
    /// Matching pennies in loss form: `[[1, 0], [0, 1]]`.
    pub fn matching_pennies() -> Self {
        MatrixGame::from_flat(2, 2, vec![1.0, 0.0, 0.0, 1.0], LossMode::Bernoulli).expect("valid entries")
    }
}
