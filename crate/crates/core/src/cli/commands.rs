use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::svg::curve_svg;
use super::CliError;
use crate::game::MatrixGame;
use crate::harness::{
    fit_rate, geometric_checkpoints, lower_bound_experiment, monte_carlo_lp, replication_seed, run_episode_from_specs,
    write_curve_csv, write_trace_csv, Diagnostics, EgTarget, HarnessError, McConfig, RateCurve,
};
use crate::learners::LearnerSpec;
use crate::verify::{run_suite, Suite, VerifyOptions};

/// Files written by [`cmd_run`].
#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub curve: RateCurve,
    pub curve_path: PathBuf,
    pub trace_paths: Vec<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

/// Tracks files written so far and deletes them unless the command finishes.
struct OutputGuard {
    dir: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
    keep: bool,
}

impl OutputGuard {
    fn new(dir: &Path) -> Result<Self, CliError> {
        let created_dir = !dir.exists();
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), created_dir, files: Vec::new(), keep: false })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>, CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path)?;
        self.files.push(path);
        Ok(BufWriter::new(file))
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if self.keep {
            return;
        }
        for f in &self.files {
            let _ = std::fs::remove_file(f);
        }
        if self.created_dir {
            let _ = std::fs::remove_dir(&self.dir);
        }
    }
}

/// Monte Carlo curve plus optional traces and chart.
pub fn cmd_run(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<RunOutputs, CliError> {
    let game = cfg.load_game()?;
    let checkpoints = cfg.checkpoints.resolve(cfg.horizon)?;
    let mut mc = McConfig::new(cfg.horizon, cfg.reps, cfg.p, checkpoints, cfg.seed);
    mc.threads = cfg.threads;
    let curve = monte_carlo_lp(&game, &cfg.min_algo, &cfg.max_algo, &mc)?;

    let mut guard = OutputGuard::new(&cfg.out)?;
    let mut w = guard.create("curve.csv")?;
    write_curve_csv(&curve, &mut w)?;
    w.flush()?;
    let curve_path = guard.files[0].clone();

    let mut trace_paths = Vec::new();
    let diag = Diagnostics { record_rounds: true, record_delta: game.num_max_actions() == 2, ..Diagnostics::default() };
    for rep in 0..cfg.traces.min(cfg.reps) {
        let seed = replication_seed(cfg.seed, rep as u64);
        let trace = run_episode_from_specs(&game, &cfg.min_algo, &cfg.max_algo, cfg.horizon, seed, &diag)?;
        let mut w = guard.create(&format!("trace-{rep}.csv"))?;
        write_trace_csv(&trace.rounds, &mut w)?;
        w.flush()?;
        trace_paths.push(guard.files.last().cloned().expect("just created"));
    }

    let svg_path = if cfg.svg {
        let title = format!("||EG||_{} of {} vs {}", cfg.p, cfg.min_algo, cfg.max_algo);
        let mut w = guard.create("curve.svg")?;
        w.write_all(curve_svg(&curve, &title).as_bytes())?;
        w.flush()?;
        guard.files.last().cloned()
    } else {
        None
    };

    writeln!(stdout, "{:>10} {:>14} {:>12} {:>6}", "t", "lp_estimate", "stderr", "R")?;
    for c in &curve.points {
        writeln!(stdout, "{:>10} {:>14.6e} {:>12.3e} {:>6}", c.t, c.estimate, c.stderr, c.reps)?;
    }
    for f in &guard.files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    guard.keep = true;
    Ok(RunOutputs { curve, curve_path, trace_paths, svg_path })
}

/// Prints every check of `suite`; fails when any check fails.
pub fn cmd_verify(suite: Suite, opts: &VerifyOptions, stdout: &mut dyn Write) -> Result<(), CliError> {
    let checks = run_suite(suite, opts)?;
    for c in &checks {
        writeln!(stdout, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(stdout, "{suite}: {} of {} checks passed", checks.len() - failed, checks.len())?;
    if failed > 0 {
        return Err(CliError::ChecksFailed { failed, total: checks.len() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct Table1Options {
    pub horizon: u64,
    pub reps: usize,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub algorithm: String,
    pub p: f64,
    pub theoretical: f64,
    /// NaN when the curve has too few positive points in the fit window.
    pub slope: f64,
    pub slope_stderr: f64,
    pub t_min: u64,
    pub t_max: u64,
}

fn fitted_row(algorithm: &str, p: f64, theoretical: f64, curve: &RateCurve, t_min: u64) -> Result<Table1Row, CliError> {
    let (slope, slope_stderr, lo, hi) = match fit_rate(curve, t_min as f64) {
        Ok(f) => (f.slope, f.slope_stderr, f.t_min, f.t_max),
        Err(HarnessError::InsufficientData(_)) => (f64::NAN, f64::NAN, t_min, curve.last().map_or(0, |c| c.t)),
        Err(e) => return Err(e.into()),
    };
    Ok(Table1Row { algorithm: algorithm.into(), p, theoretical, slope, slope_stderr, t_min: lo, t_max: hi })
}

/// Fitted slopes over the last two decades of the horizon for every learner.
pub fn cmd_table1(
    game: &MatrixGame,
    opts: &Table1Options,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Vec<Table1Row>, CliError> {
    if opts.horizon < 10 || opts.reps == 0 {
        return Err(CliError::Config("table1 needs horizon >= 10 and reps >= 1".into()));
    }
    let t_min = (opts.horizon / 100).max(10);
    let grid = geometric_checkpoints(opts.horizon, 10f64.sqrt())?;
    let mc = |p: f64, checkpoints: Vec<u64>, horizon: u64, salt: u64| {
        let mut cfg = McConfig::new(horizon, opts.reps, p, checkpoints, replication_seed(opts.seed, 1_000 + salt));
        cfg.threads = opts.threads;
        cfg
    };
    let mut rows = Vec::new();

    for (k, &p) in [0.5, 1.0, 2.0].iter().enumerate() {
        let spec = LearnerSpec::Eoe { p };
        let curve = monte_carlo_lp(game, &spec, &spec, &mc(p, grid.clone(), opts.horizon, k as u64))?;
        rows.push(fitted_row(&format!("eoe p={p}"), p, -1.0 / (2.0 + p), &curve, t_min)?);
    }

    let mut points = Vec::new();
    for (k, t) in grid.iter().copied().filter(|&t| t >= t_min).enumerate() {
        let spec = LearnerSpec::RegExp3Horizon { horizon: t };
        let curve = monte_carlo_lp(game, &spec, &spec, &mc(2.0, vec![t], t, 10 + k as u64))?;
        points.push(curve.points[0]);
    }
    rows.push(fitted_row("regexp3 (tuned per T)", 2.0, -0.25, &RateCurve { p: 2.0, points }, t_min)?);

    let curve =
        monte_carlo_lp(game, &LearnerSpec::Doubling, &LearnerSpec::Doubling, &mc(2.0, grid.clone(), opts.horizon, 30))?;
    rows.push(fitted_row("doubling", 2.0, -0.25, &curve, t_min)?);

    let mut cfg = mc(2.0, grid, opts.horizon, 40);
    cfg.target = EgTarget::Output;
    let curve = monte_carlo_lp(game, &LearnerSpec::Exp3Ix, &LearnerSpec::Exp3Ix, &cfg)?;
    rows.push(fitted_row("exp3ix average output", 2.0, -0.5, &curve, t_min)?);

    writeln!(
        stdout,
        "{:<24} {:>5} {:>12} {:>12} {:>10} {:>16}",
        "algorithm", "p", "theoretical", "fitted", "stderr", "t range"
    )?;
    for r in &rows {
        writeln!(
            stdout,
            "{:<24} {:>5} {:>12.4} {:>12.4} {:>10.4} {:>16}",
            r.algorithm,
            r.p,
            r.theoretical,
            r.slope,
            r.slope_stderr,
            format!("{}..{}", r.t_min, r.t_max)
        )?;
    }

    if let Some(dir) = out {
        let mut guard = OutputGuard::new(dir)?;
        let mut w = csv::Writer::from_writer(guard.create("table1.csv")?);
        w.write_record(["algorithm", "p", "theoretical_slope", "fitted_slope", "slope_stderr", "t_min", "t_max"])
            .map_err(HarnessError::from)?;
        for r in &rows {
            w.write_record([
                r.algorithm.clone(),
                format!("{:?}", r.p),
                format!("{:?}", r.theoretical),
                format!("{:?}", r.slope),
                format!("{:?}", r.slope_stderr),
                r.t_min.to_string(),
                r.t_max.to_string(),
            ])
            .map_err(HarnessError::from)?;
        }
        w.flush()?;
        writeln!(stdout, "wrote {}", guard.files[0].display())?;
        guard.keep = true;
    }
    Ok(rows)
}

/// Exploitability on the `+/-eps_T` hard instances and the null-instance KL budget.
pub fn cmd_lowerbound(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let report =
        match lower_bound_experiment(&cfg.min_algo, &cfg.max_algo, cfg.p, cfg.horizon, cfg.reps, cfg.seed, cfg.threads)
        {
            Ok(r) => r,
            Err(e @ HarnessError::BudgetExceeded { .. }) => {
                writeln!(stdout, "FAIL {e}")?;
                return Err(CliError::ChecksFailed { failed: 1, total: 1 });
            }
            Err(e) => return Err(e.into()),
        };
    writeln!(stdout, "learners        {} vs {}", cfg.min_algo, cfg.max_algo)?;
    writeln!(stdout, "horizon T       {}", report.horizon)?;
    writeln!(stdout, "replications    {}", report.reps)?;
    writeln!(stdout, "eps_T           {:.6e}", report.epsilon)?;
    writeln!(stdout, "||EG||_{} (+eps) {:.6e}", report.p, report.lp_plus)?;
    writeln!(stdout, "||EG||_{} (-eps) {:.6e}", report.p, report.lp_minus)?;
    writeln!(stdout, "worst case      {:.6e}  (eps_T/2 = {:.6e})", report.worst, report.epsilon / 2.0)?;
    writeln!(
        stdout,
        "KL budget       {:.6e} +/- {:.2e}  (analytic bound {:.6e})",
        report.mean_kl_budget, report.kl_budget_stderr, report.mean_kl_bound
    )?;
    Ok(())
}
