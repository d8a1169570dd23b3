//! Flat `key = value` experiment configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::CliError;
use crate::game::{hard_instance, LossMode, MatrixGame};
use crate::harness::geometric_checkpoints;
use crate::learners::LearnerSpec;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LASTITER_OUT";
pub const DEFAULT_OUT_DIR: &str = "lastiter-out";

/// Where the game comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSource {
    Hard(f64),
    File(PathBuf),
}

impl FromStr for GameSource {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix("hard:") {
            Some(eps) => eps
                .trim()
                .parse()
                .map(GameSource::Hard)
                .map_err(|_| CliError::Config(format!("cannot parse epsilon in `{s}`"))),
            None => Ok(GameSource::File(PathBuf::from(s))),
        }
    }
}

impl GameSource {
    pub fn load(&self) -> Result<MatrixGame, CliError> {
        match self {
            GameSource::Hard(eps) => Ok(hard_instance(*eps)?),
            GameSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read game file {}: {e}", path.display())))?;
                Ok(text.parse()?)
            }
        }
    }
}

/// Checkpoint grid: geometric with a ratio, or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckpointSpec {
    Geometric(f64),
    List(Vec<u64>),
}

impl FromStr for CheckpointSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "geom" {
            return Ok(CheckpointSpec::Geometric(10f64.sqrt()));
        }
        if let Some(r) = s.strip_prefix("geom:") {
            let ratio: f64 = r.parse().map_err(|_| CliError::Config(format!("bad checkpoint ratio `{r}`")))?;
            return Ok(CheckpointSpec::Geometric(ratio));
        }
        let list = s
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Config(format!("bad checkpoint list `{s}`")))?;
        Ok(CheckpointSpec::List(list))
    }
}

impl CheckpointSpec {
    pub fn resolve(&self, horizon: u64) -> Result<Vec<u64>, CliError> {
        match self {
            CheckpointSpec::Geometric(ratio) => Ok(geometric_checkpoints(horizon, *ratio)?),
            CheckpointSpec::List(list) => {
                if list.is_empty() || list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Config("checkpoints must be strictly increasing".into()));
                }
                if list[0] == 0 || list[list.len() - 1] > horizon {
                    return Err(CliError::Config(format!("checkpoints must lie in 1..={horizon}")));
                }
                Ok(list.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub game: GameSource,
    pub min_algo: LearnerSpec,
    pub max_algo: LearnerSpec,
    pub horizon: u64,
    pub reps: usize,
    pub p: f64,
    pub seed: u64,
    pub checkpoints: CheckpointSpec,
    pub out: PathBuf,
    pub deterministic_loss: bool,
    /// Replications whose full per-round trace is written.
    pub traces: usize,
    pub svg: bool,
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_OUT_DIR.into());
        Self {
            game: GameSource::Hard(0.0),
            min_algo: LearnerSpec::RegExp3Horizon { horizon: 10_000 },
            max_algo: LearnerSpec::RegExp3Horizon { horizon: 10_000 },
            horizon: 10_000,
            reps: 100,
            p: 2.0,
            seed: 1,
            checkpoints: CheckpointSpec::Geometric(10f64.sqrt()),
            out,
            deterministic_loss: false,
            traces: 0,
            svg: false,
            threads: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config(format!("cannot parse `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("expected a boolean for `{key}`, got `{value}`"))),
    }
}

impl ExperimentConfig {
    /// Sets one key; keys use underscores (`min_algo`) or dashes (`min-algo`).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "game" => self.game = value.parse()?,
            "min_algo" => self.min_algo = value.parse()?,
            "max_algo" => self.max_algo = value.parse()?,
            "horizon" => self.horizon = parse_value(key, value)?,
            "reps" => self.reps = parse_value(key, value)?,
            "p" => self.p = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "checkpoints" => self.checkpoints = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            "deterministic_loss" => self.deterministic_loss = parse_bool(key, value)?,
            "traces" => self.traces = parse_value(key, value)?,
            "svg" => self.svg = parse_bool(key, value)?,
            "threads" => self.threads = Some(parse_value(key, value)?),
            other => return Err(CliError::Config(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        let mut seen = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim().to_string();
            if seen.contains(&key) {
                return Err(CliError::Config(format!("line {}: duplicate key `{key}`", n + 1)));
            }
            self.set(&key, value)?;
            seen.push(key);
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.horizon == 0 {
            return Err(CliError::Config("horizon must be at least 1".into()));
        }
        if self.reps == 0 {
            return Err(CliError::Config("reps must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(CliError::Config(format!("p = {} must be positive", self.p)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        if let GameSource::File(path) = &self.game {
            if !path.is_file() {
                return Err(CliError::Config(format!("game file {} does not exist", path.display())));
            }
        }
        self.checkpoints.resolve(self.horizon)?;
        Ok(())
    }

    pub fn load_game(&self) -> Result<MatrixGame, CliError> {
        let game = self.game.load()?;
        Ok(if self.deterministic_loss { game.with_loss_mode(LossMode::Deterministic) } else { game })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(
            "# comment\n game = hard:0.05\nmin_algo = eoe:p=2\nmax-algo = exp3ix\n\nhorizon = 500 # inline\nreps=3\np = 1.5\ncheckpoints = 10,100,500\ndeterministic_loss = true\n",
        )
        .unwrap();
        assert_eq!(cfg.game, GameSource::Hard(0.05));
        assert_eq!(cfg.min_algo, LearnerSpec::Eoe { p: 2.0 });
        assert_eq!(cfg.max_algo, LearnerSpec::Exp3Ix);
        assert_eq!((cfg.horizon, cfg.reps, cfg.p), (500, 3, 1.5));
        assert_eq!(cfg.checkpoints.resolve(500).unwrap(), vec![10, 100, 500]);
        assert!(cfg.deterministic_loss);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_entries() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.apply_text("colour = red").is_err());
        assert!(cfg.apply_text("horizon").is_err());
        assert!(cfg.apply_text("reps = 2\nreps = 3").is_err());
        assert!(cfg.apply_text("game = hard:x").is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.horizon = 100;
        cfg.checkpoints = CheckpointSpec::List(vec![10, 1000]);
        assert!(cfg.validate().is_err());
        cfg.checkpoints = CheckpointSpec::Geometric(10.0);
        cfg.game = GameSource::File("/nonexistent/game.txt".into());
        assert!(cfg.validate().is_err());
    }
}
