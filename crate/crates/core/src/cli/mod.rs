//! Command-line driver: `run`, `verify`, `table1` and `lowerbound`.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage,
//! configuration or runtime errors.

mod commands;
mod config;
mod svg;

pub use commands::{cmd_lowerbound, cmd_run, cmd_table1, cmd_verify, RunOutputs, Table1Options, Table1Row};
pub use config::{CheckpointSpec, ExperimentConfig, GameSource, DEFAULT_OUT_DIR, OUT_DIR_ENV};
pub use svg::curve_svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::game::GameError;
use crate::harness::HarnessError;
use crate::learners::LearnerError;
use crate::verify::{Suite, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lastiter", version, about = "Uncoupled bandit learning in zero-sum matrix games")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo L^p exploitability curve for a pair of learners
    Run(ExperimentArgs),
    /// Run a named verification suite and report every check
    Verify(VerifyArgs),
    /// Fitted convergence slopes for every learner beside the theoretical exponents
    Table1(Table1Args),
    /// Hard-instance experiment: exploitability under +/-eps_T and the KL budget
    Lowerbound(ExperimentArgs),
}

/// Flags shared by `run` and `lowerbound`; each overrides the config file.
#[derive(Debug, Args, Default)]
struct ExperimentArgs {
    /// Flat `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Game file path or `hard:<epsilon>`
    #[arg(long)]
    game: Option<String>,
    /// Learner for the minimizing player, e.g. `regexp3:T=10000`
    #[arg(long)]
    min_algo: Option<String>,
    /// Learner for the maximizing player
    #[arg(long)]
    max_algo: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
    /// Monte Carlo replications
    #[arg(long)]
    reps: Option<usize>,
    /// Norm order of the exploitability estimate
    #[arg(long)]
    p: Option<f64>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// `geom`, `geom:<ratio>` or a comma-separated list of rounds
    #[arg(long)]
    checkpoints: Option<String>,
    /// Output directory (default: $LASTITER_OUT or ./lastiter-out)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the mean loss instead of a Bernoulli draw
    #[arg(long)]
    deterministic_loss: bool,
    /// Write per-round traces for the first N replications
    #[arg(long)]
    traces: Option<usize>,
    /// Also write an SVG chart of the curve
    #[arg(long)]
    svg: bool,
    /// Worker threads for the replications
    #[arg(long)]
    threads: Option<usize>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides: [(&str, Option<String>); 11] = [
            ("game", self.game.clone()),
            ("min_algo", self.min_algo.clone()),
            ("max_algo", self.max_algo.clone()),
            ("horizon", self.horizon.map(|v| v.to_string())),
            ("reps", self.reps.map(|v| v.to_string())),
            ("p", self.p.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("checkpoints", self.checkpoints.clone()),
            ("out", self.out.as_ref().map(|v| v.display().to_string())),
            ("traces", self.traces.map(|v| v.to_string())),
            ("threads", self.threads.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                cfg.set(key, &value)?;
            }
        }
        cfg.deterministic_loss |= self.deterministic_loss;
        cfg.svg |= self.svg;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// One of oracles, lowerbound, kl-contraction, last-iterate, eoe, doubling
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct Table1Args {
    /// Game file path or `hard:<epsilon>`
    #[arg(long, default_value = "hard:0")]
    game: String,
    #[arg(long, default_value_t = 100_000)]
    horizon: u64,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    deterministic_loss: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Also write the table as CSV into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(&args.resolve()?, stdout).map(|_| ()),
        Command::Lowerbound(args) => cmd_lowerbound(&args.resolve()?, stdout),
        Command::Verify(args) => {
            let suite: Suite = args.suite.parse().map_err(CliError::Config)?;
            let mut opts = VerifyOptions::default();
            if let Some(seed) = args.seed {
                opts.master_seed = seed;
            }
            if args.threads == Some(0) {
                return Err(CliError::Config("threads must be positive".into()));
            }
            opts.threads = args.threads;
            cmd_verify(suite, &opts, stdout)
        }
        Command::Table1(args) => {
            let mut game = args.game.parse::<GameSource>()?.load()?;
            if args.deterministic_loss {
                game = game.with_loss_mode(crate::game::LossMode::Deterministic);
            }
            if args.threads == Some(0) {
                return Err(CliError::Config("threads must be positive".into()));
            }
            let opts = Table1Options { horizon: args.horizon, reps: args.reps, seed: args.seed, threads: args.threads };
            cmd_table1(&game, &opts, args.out.as_deref(), stdout).map(|_| ())
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
