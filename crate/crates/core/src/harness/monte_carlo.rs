use rayon::prelude::*;

use super::episode::{run_episode_from_specs, Checkpoint, Diagnostics};
use super::seeds::replication_seed;
use super::stats::{lp_estimate, CurvePoint, RateCurve};
use super::HarnessError;
use crate::game::MatrixGame;
use crate::learners::LearnerSpec;

/// Which profile the exploitability gap is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EgTarget {
    /// The profile sampled from at round `t`.
    #[default]
    Played,
    /// The learners' recommendations after round `t`.
    Output,
}

#[derive(Debug, Clone)]
pub struct McConfig {
    pub horizon: u64,
    pub reps: usize,
    pub p: f64,
    pub checkpoints: Vec<u64>,
    pub master_seed: u64,
    pub target: EgTarget,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(horizon: u64, reps: usize, p: f64, checkpoints: Vec<u64>, master_seed: u64) -> Self {
        Self { horizon, reps, p, checkpoints, master_seed, target: EgTarget::Played, threads: None }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.horizon == 0 {
            return Err(HarnessError::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.reps == 0 {
            return Err(HarnessError::InvalidConfig("at least one replication is required".into()));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(HarnessError::InvalidConfig(format!("norm order p = {} must be positive", self.p)));
        }
        if self.checkpoints.is_empty() {
            return Err(HarnessError::InvalidConfig("no checkpoints".into()));
        }
        if self.threads == Some(0) {
            return Err(HarnessError::InvalidConfig("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// Runs `f` on the derived seed of each replication, in parallel, and returns
/// the results in replication order.
pub fn run_replications<T, F>(
    reps: usize,
    master_seed: u64,
    threads: Option<usize>,
    f: F,
) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(u64) -> Result<T, HarnessError> + Sync,
{
    let job = || {
        (0..reps as u64)
            .into_par_iter()
            .map(|i| f(replication_seed(master_seed, i)))
            .collect::<Result<Vec<T>, HarnessError>>()
    };
    match threads {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::ThreadPool(e.to_string()))?
            .install(job),
    }
}

/// Checkpoints of every replication, in replication order. `diag.checkpoints`
/// is replaced by `cfg.checkpoints`.
pub fn monte_carlo_checkpoints(
    game: &MatrixGame,
    min_spec: &LearnerSpec,
    max_spec: &LearnerSpec,
    cfg: &McConfig,
    diag: &Diagnostics,
) -> Result<Vec<Vec<Checkpoint>>, HarnessError> {
    cfg.validate()?;
    let diag = Diagnostics { checkpoints: cfg.checkpoints.clone(), ..diag.clone() };
    run_replications(cfg.reps, cfg.master_seed, cfg.threads, |seed| {
        Ok(run_episode_from_specs(game, min_spec, max_spec, cfg.horizon, seed, &diag)?.checkpoints)
    })
}

/// Empirical `||EG||_p` at each checkpoint over `cfg.reps` replications.
pub fn monte_carlo_lp(
    game: &MatrixGame,
    min_spec: &LearnerSpec,
    max_spec: &LearnerSpec,
    cfg: &McConfig,
) -> Result<RateCurve, HarnessError> {
    cfg.validate()?;
    let diag = Diagnostics::checkpoints(cfg.checkpoints.clone());
    let per_rep = run_replications(cfg.reps, cfg.master_seed, cfg.threads, |seed| {
        let trace = run_episode_from_specs(game, min_spec, max_spec, cfg.horizon, seed, &diag)?;
        Ok(trace
            .checkpoints
            .iter()
            .map(|c| match cfg.target {
                EgTarget::Played => c.eg,
                EgTarget::Output => c.output_eg,
            })
            .collect::<Vec<f64>>())
    })?;
    let points = cfg
        .checkpoints
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let column: Vec<f64> = per_rep.iter().map(|row| row[k]).collect();
            let (estimate, stderr) = lp_estimate(&column, cfg.p);
            CurvePoint { t, estimate, stderr, reps: cfg.reps }
        })
        .collect();
    Ok(RateCurve { p: cfg.p, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{exploitability_gap, hard_instance, Policy, Profile};

    #[test]
    fn static_profile_gives_exact_eg() {
        let game = hard_instance(0.04).unwrap();
        let spec: LearnerSpec = "fixed:0.2,0.8".parse().unwrap();
        let uni = LearnerSpec::Uniform;
        let cfg = McConfig::new(50, 9, 2.0, vec![1, 7, 50], 1);
        let curve = monte_carlo_lp(&game, &spec, &uni, &cfg).unwrap();
        let exact =
            exploitability_gap(&game, &Profile::new(Policy::new(vec![0.2, 0.8]).unwrap(), Policy::uniform(2))).unwrap();
        for c in &curve.points {
            assert_eq!(c.estimate, exact);
            assert_eq!(c.stderr, 0.0);
            assert_eq!(c.reps, 9);
        }
    }

    #[test]
    fn single_replication_matches_trace() {
        let game = hard_instance(0.0).unwrap();
        let spec: LearnerSpec = "regexp3:T=200".parse().unwrap();
        let cps = vec![1, 10, 100, 200];
        let cfg = McConfig::new(200, 1, 2.0, cps.clone(), 77);
        let curve = monte_carlo_lp(&game, &spec, &spec, &cfg).unwrap();
        let trace = crate::harness::run_episode_from_specs(
            &game,
            &spec,
            &spec,
            200,
            replication_seed(77, 0),
            &Diagnostics::checkpoints(cps),
        )
        .unwrap();
        for (c, cp) in curve.points.iter().zip(&trace.checkpoints) {
            assert_eq!(c.estimate, cp.eg);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let game = hard_instance(0.02).unwrap();
        let spec: LearnerSpec = "eoe:p=2".parse().unwrap();
        let mut cfg = McConfig::new(300, 12, 1.5, vec![3, 30, 300], 5);
        cfg.threads = Some(1);
        let one = monte_carlo_lp(&game, &spec, &spec, &cfg).unwrap();
        cfg.threads = Some(4);
        let four = monte_carlo_lp(&game, &spec, &spec, &cfg).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn rejects_bad_config() {
        let game = hard_instance(0.0).unwrap();
        let u = LearnerSpec::Uniform;
        assert!(monte_carlo_lp(&game, &u, &u, &McConfig::new(10, 0, 2.0, vec![10], 0)).is_err());
        assert!(monte_carlo_lp(&game, &u, &u, &McConfig::new(10, 2, 0.0, vec![10], 0)).is_err());
        assert!(monte_carlo_lp(&game, &u, &u, &McConfig::new(10, 2, 2.0, vec![11], 0)).is_err());
        assert!(monte_carlo_lp(&game, &u, &u, &McConfig::new(10, 2, 2.0, vec![], 0)).is_err());
    }
}
