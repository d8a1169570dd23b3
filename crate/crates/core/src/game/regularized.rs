//! Entropy-regularized game and its equilibrium oracle.
//!
//! `L_tau(mu, nu) = mu^T L nu + tau KL(mu, mu0) - tau KL(nu, nu0)` has a unique
//! equilibrium, characterized by the smoothed best-response conditions
//! `mu ∝ mu0 exp(-(L nu) / tau)` and `nu ∝ nu0 exp((mu^T L) / tau)`.

use super::{GameError, MatrixGame, Policy, Profile};
use crate::numerics::log_sum_exp;

pub const REG_EQ_DEFAULT_TOL: f64 = 1e-10;
pub const REG_EQ_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedGame {
    base: MatrixGame,
    tau: f64,
    anchor: Profile,
}

impl RegularizedGame {
    pub fn new(base: MatrixGame, tau: f64, anchor: Profile) -> Result<Self, GameError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(GameError::OutOfDomain { value: tau, domain: "tau > 0" });
        }
        let (a, b) = base.dims();
        if anchor.min_policy.len() != a {
            return Err(GameError::DimensionMismatch { expected: a, got: anchor.min_policy.len() });
        }
        if anchor.max_policy.len() != b {
            return Err(GameError::DimensionMismatch { expected: b, got: anchor.max_policy.len() });
        }
        if !anchor.is_strictly_positive() {
            return Err(GameError::ZeroEntry);
        }
        Ok(Self { base, tau, anchor })
    }

    /// Regularization toward the uniform profile.
    pub fn with_uniform_anchor(base: MatrixGame, tau: f64) -> Result<Self, GameError> {
        let (a, b) = base.dims();
        Self::new(base, tau, Profile::uniform(a, b))
    }

    pub fn base(&self) -> &MatrixGame {
        &self.base
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn anchor(&self) -> &Profile {
        &self.anchor
    }

    /// `F_tau(w) = (L nu + tau (log mu - log mu0), 1 - mu^T L + tau (log nu - log nu0))`.
    pub fn operator(&self, w: &Profile) -> Result<Vec<f64>, GameError> {
        if !w.is_strictly_positive() {
            return Err(GameError::ZeroEntry);
        }
        let mut out = self.base.pseudo_gradient(w)?;
        let logs = w
            .min_policy
            .probs()
            .iter()
            .zip(self.anchor.min_policy.probs())
            .chain(w.max_policy.probs().iter().zip(self.anchor.max_policy.probs()));
        for (o, (p, p0)) in out.iter_mut().zip(logs) {
            *o += self.tau * (p.ln() - p0.ln());
        }
        Ok(out)
    }

    /// Smoothed best responses `(mu0 exp(-(L nu)/tau), nu0 exp((mu^T L)/tau))`, normalized.
    pub fn smoothed_best_response(&self, w: &Profile) -> Result<Profile, GameError> {
        let lv = self.base.loss_vector(&w.max_policy)?;
        let ml = self.base.payoff_vector(&w.min_policy)?;
        let mu_logits: Vec<f64> =
            self.anchor.min_policy.probs().iter().zip(&lv).map(|(p0, l)| p0.ln() - l / self.tau).collect();
        let nu_logits: Vec<f64> =
            self.anchor.max_policy.probs().iter().zip(&ml).map(|(q0, r)| q0.ln() + r / self.tau).collect();
        Ok(Profile::new(Policy::from_log_weights(&mu_logits), Policy::from_log_weights(&nu_logits)))
    }

    /// Infinity-norm gap between `w` and its smoothed best response.
    pub fn fixed_point_residual(&self, w: &Profile) -> Result<f64, GameError> {
        let br = self.smoothed_best_response(w)?;
        let gap = w
            .min_policy
            .probs()
            .iter()
            .zip(br.min_policy.probs())
            .chain(w.max_policy.probs().iter().zip(br.max_policy.probs()))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        Ok(gap)
    }

    /// Mirror-prox step size.
    pub fn step_size(&self) -> f64 {
        self.tau.min(0.25)
    }

    /// Equilibrium by deterministic mirror-prox in the entropic geometry.
    ///
    /// The bilinear part of the operator is taken explicitly (extragradient);
    /// the `tau (log w - log w0)` part is taken as a proximal term, which keeps
    /// the iteration stable for any `tau`. Stops once the fixed-point residual
    /// is below `tol`.
    pub fn equilibrium(&self, tol: f64) -> Result<Profile, GameError> {
        self.equilibrium_with_cap(tol, REG_EQ_MAX_ITER)
    }

    pub fn equilibrium_with_cap(&self, tol: f64, max_iter: usize) -> Result<Profile, GameError> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(GameError::OutOfDomain { value: tol, domain: "tol > 0" });
        }
        let eta = self.step_size();
        let c = eta * self.tau;
        let log_mu0: Vec<f64> = self.anchor.min_policy.probs().iter().map(|p| p.ln()).collect();
        let log_nu0: Vec<f64> = self.anchor.max_policy.probs().iter().map(|p| p.ln()).collect();

        let mut log_mu = log_mu0.clone();
        let mut log_nu = log_nu0.clone();
        let mut w = self.anchor.clone();
        let mut residual = self.fixed_point_residual(&w)?;
        let mut iterations = 0;
        while residual >= tol {
            if iterations >= max_iter {
                return Err(GameError::NoConvergence { iterations, residual });
            }
            // extrapolation from w
            let lv = self.base.loss_vector(&w.max_policy)?;
            let ml = self.base.payoff_vector(&w.min_policy)?;
            let half_mu = prox_step(&log_mu, &log_mu0, &lv, eta, c, 1.0);
            let half_nu = prox_step(&log_nu, &log_nu0, &ml, eta, c, -1.0);
            let half = Profile::new(Policy::from_log_weights(&half_mu), Policy::from_log_weights(&half_nu));
            // update from w with the operator evaluated at the extrapolated point
            let lv = self.base.loss_vector(&half.max_policy)?;
            let ml = self.base.payoff_vector(&half.min_policy)?;
            log_mu = prox_step(&log_mu, &log_mu0, &lv, eta, c, 1.0);
            log_nu = prox_step(&log_nu, &log_nu0, &ml, eta, c, -1.0);
            w = Profile::new(Policy::from_log_weights(&log_mu), Policy::from_log_weights(&log_nu));
            residual = self.fixed_point_residual(&w)?;
            iterations += 1;
        }
        Ok(w)
    }
}

/// One composite entropic step, returned as normalized log-probabilities:
/// `log p' ∝ (log p + c log p0 - eta g) / (1 + c)` with `g = sign * v` (plus a
/// constant shift of one for the max-player, which normalization absorbs).
fn prox_step(log_p: &[f64], log_p0: &[f64], v: &[f64], eta: f64, c: f64, sign: f64) -> Vec<f64> {
    let mut out: Vec<f64> =
        log_p.iter().zip(log_p0).zip(v).map(|((lp, lp0), vi)| (lp + c * lp0 - eta * sign * vi) / (1.0 + c)).collect();
    let lse = log_sum_exp(&out);
    for x in &mut out {
        *x -= lse;
    }
    out
}

/// Free-function form of [`RegularizedGame::equilibrium`].
pub fn regularized_equilibrium(reg: &RegularizedGame, tol: f64) -> Result<Profile, GameError> {
    reg.equilibrium(tol)
}
