use super::episode::{run_episode_from_specs, Diagnostics, EpisodeTrace};
use super::monte_carlo::{monte_carlo_lp, run_replications, McConfig};
use super::seeds::splitmix64;
use super::stats::mean_and_stderr;
use super::HarnessError;
use crate::game::{bernoulli_kl, hard_instance, reward_vector_law, GameError, HARD_EPSILON_MAX};
use crate::learners::LearnerSpec;

/// Realized information about the sign of `epsilon` and its analytic ceiling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlBudget {
    pub budget: f64,
    pub bound: f64,
}

/// Sums, over rounds where the min player chose action 0, the KL divergence
/// between its loss law under the null instance and under `epsilon`.
///
/// The trace must come from the null instance with `record_delta` on.
pub fn kl_budget(trace: &EpisodeTrace, epsilon: f64) -> Result<KlBudget, HarnessError> {
    if !(epsilon.abs() <= HARD_EPSILON_MAX) {
        return Err(GameError::OutOfDomain { value: epsilon, domain: "[-1/12, 1/12]" }.into());
    }
    if trace.rounds.is_empty() {
        return Err(HarnessError::MissingDiagnostics("per-round"));
    }
    let mut budget = 0.0;
    let mut delta_sq = 0.0;
    for r in &trace.rounds {
        let delta = r.delta.ok_or(HarnessError::MissingDiagnostics("delta"))?;
        if r.a != 0 {
            continue;
        }
        let (null, _) = reward_vector_law(0.0, delta)?;
        let (alt, _) = reward_vector_law(epsilon, delta)?;
        budget += bernoulli_kl(null, alt);
        delta_sq += delta * delta;
    }
    let bound = 24.0 * epsilon * epsilon * delta_sq;
    if budget > bound {
        return Err(HarnessError::BudgetExceeded { budget, bound });
    }
    Ok(KlBudget { budget, bound })
}

/// `T^(-1/(2+p)) / (24 sqrt 6)`.
pub fn lower_bound_epsilon(horizon: u64, p: f64) -> f64 {
    (horizon as f64).powf(-1.0 / (2.0 + p)) / (24.0 * 6f64.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub epsilon: f64,
    pub horizon: u64,
    pub p: f64,
    pub reps: usize,
    /// `||EG||_p` at the horizon on the `+epsilon` instance.
    pub lp_plus: f64,
    pub lp_minus: f64,
    pub worst: f64,
    pub mean_kl_budget: f64,
    pub kl_budget_stderr: f64,
    pub mean_kl_bound: f64,
}

/// Runs the learners on the `+epsilon` and `-epsilon` hard instances and
/// accounts the KL budget on the null instance.
pub fn lower_bound_experiment(
    min_spec: &LearnerSpec,
    max_spec: &LearnerSpec,
    p: f64,
    horizon: u64,
    reps: usize,
    master_seed: u64,
    threads: Option<usize>,
) -> Result<LowerBoundReport, HarnessError> {
    let epsilon = lower_bound_epsilon(horizon, p);
    let mut lp = [0.0; 2];
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        let game = hard_instance(sign * epsilon)?;
        let mut cfg = McConfig::new(horizon, reps, p, vec![horizon], splitmix64(master_seed.wrapping_add(k as u64)));
        cfg.threads = threads;
        lp[k] = monte_carlo_lp(&game, min_spec, max_spec, &cfg)?.points[0].estimate;
    }
    let null = hard_instance(0.0)?;
    let diag = Diagnostics { record_rounds: true, record_delta: true, ..Diagnostics::default() };
    let budgets = run_replications(reps, splitmix64(master_seed.wrapping_add(2)), threads, |seed| {
        let trace = run_episode_from_specs(&null, min_spec, max_spec, horizon, seed, &diag)?;
        kl_budget(&trace, epsilon)
    })?;
    let values: Vec<f64> = budgets.iter().map(|b| b.budget).collect();
    let bounds: Vec<f64> = budgets.iter().map(|b| b.bound).collect();
    let (mean_kl_budget, kl_budget_stderr) = mean_and_stderr(&values);
    Ok(LowerBoundReport {
        epsilon,
        horizon,
        p,
        reps,
        lp_plus: lp[0],
        lp_minus: lp[1],
        worst: lp[0].max(lp[1]),
        mean_kl_budget,
        kl_budget_stderr,
        mean_kl_bound: mean_and_stderr(&bounds).0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::RoundRecord;

    fn trace_of(rows: &[(usize, f64)]) -> EpisodeTrace {
        EpisodeTrace {
            seed: 0,
            horizon: rows.len() as u64,
            min_spec: None,
            max_spec: None,
            rounds: rows
                .iter()
                .enumerate()
                .map(|(i, &(a, d))| RoundRecord {
                    t: i as u64 + 1,
                    eg: None,
                    delta: Some(d),
                    kl_star: None,
                    a,
                    b: 0,
                    loss: 0.0,
                })
                .collect(),
            checkpoints: vec![],
        }
    }

    #[test]
    fn budget_examples() {
        let t = trace_of(&[(0, 0.5)]);
        let b = kl_budget(&t, 1.0 / 12.0).unwrap();
        let direct =
            (2.0 / 3.0) * f64::ln((2.0 / 3.0) / (7.0 / 12.0)) + (1.0 / 3.0) * f64::ln((1.0 / 3.0) / (5.0 / 12.0));
        assert!((b.budget - direct).abs() < 1e-15);
        assert!((b.budget - 0.014_639_744_644_945_18).abs() < 1e-12);
        assert!((b.bound - 1.0 / 24.0).abs() < 1e-15);
        assert_eq!(kl_budget(&t, 0.0).unwrap().budget, 0.0);
        let zero = trace_of(&[(0, 0.0), (1, 0.3), (0, 0.0)]);
        assert_eq!(kl_budget(&zero, 0.08).unwrap().budget, 0.0);
        // Rounds on action 1 carry no information.
        assert_eq!(kl_budget(&trace_of(&[(1, 0.5)]), 0.08).unwrap().budget, 0.0);
        assert!(kl_budget(&t, 0.1).is_err());
    }

    #[test]
    fn epsilon_example() {
        assert!((lower_bound_epsilon(10_000, 2.0) - 0.1 / (24.0 * 6f64.sqrt())).abs() < 1e-17);
        assert!((lower_bound_epsilon(10_000, 2.0) - 0.001_701_034_543_599_4).abs() < 1e-12);
    }

    #[test]
    fn static_nash_is_exploitable_and_uninformative() {
        let u = LearnerSpec::Uniform;
        let r = lower_bound_experiment(&u, &u, 2.0, 500, 3, 9, None).unwrap();
        assert!(r.worst >= r.epsilon / 2.0 - 1e-12);
        assert_eq!(r.mean_kl_budget, 0.0);
    }
}
