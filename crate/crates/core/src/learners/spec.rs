use std::fmt;
use std::str::FromStr;

use super::{Doubling, Eoe, Exp3Ix, FixedLearner, Learner, LearnerError, RegExp3, RegExp3Params, SharedSeed, Side};
use crate::game::Policy;

/// Textual learner description, e.g. `eoe:p=2` or `regexp3:T=10000`.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerSpec {
    /// Anytime EXP3-IX; its output is the average iterate.
    Exp3Ix,
    /// EXP3-IX wrapped in explore-or-exploit with norm order `p`.
    Eoe {
        p: f64,
    },
    /// Regularized EXP3 tuned for a horizon.
    RegExp3Horizon {
        horizon: u64,
    },
    /// Regularized EXP3 with an explicit regularization strength.
    RegExp3Tau {
        tau: f64,
    },
    /// Regularized EXP3 under the doubling schedule.
    Doubling,
    Uniform,
    Fixed(Vec<f64>),
}

impl LearnerSpec {
    /// Builds the learner for `side` of an `a x b` game.
    pub fn build(&self, side: Side, dims: (usize, usize), seed: SharedSeed) -> Result<Box<dyn Learner>, LearnerError> {
        let k = side.actions(dims);
        Ok(match self {
            LearnerSpec::Exp3Ix => Box::new(Exp3Ix::new(side, k)?),
            LearnerSpec::Eoe { p } => Box::new(Eoe::new(Exp3Ix::new(side, k)?, *p, seed)?),
            LearnerSpec::RegExp3Horizon { horizon } => Box::new(RegExp3::for_horizon(side, dims, *horizon)?),
            LearnerSpec::RegExp3Tau { tau } => Box::new(RegExp3::new(side, k, RegExp3Params::with_tau(*tau)?)?),
            LearnerSpec::Doubling => Box::new(Doubling::new(side, dims, seed)?),
            LearnerSpec::Uniform => Box::new(FixedLearner::uniform(k)),
            LearnerSpec::Fixed(probs) => {
                if probs.len() != k {
                    return Err(LearnerError::Spec(format!(
                        "fixed policy has {} entries, side has {k} actions",
                        probs.len()
                    )));
                }
                Box::new(FixedLearner::new(Policy::new(probs.clone())?))
            }
        })
    }

    /// Whether `output()` differs from the played policy by construction.
    pub fn averages(&self) -> bool {
        matches!(self, LearnerSpec::Exp3Ix)
    }
}

fn parse_param<T: FromStr>(rest: &str, key: &str, spec: &str) -> Result<T, LearnerError> {
    let value = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| LearnerError::Spec(format!("expected `{key}=<value>` in `{spec}`")))?;
    value.trim().parse().map_err(|_| LearnerError::Spec(format!("cannot parse `{value}` in `{spec}`")))
}

impl FromStr for LearnerSpec {
    type Err = LearnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r.trim())),
            None => (s, None),
        };
        let spec = match (name.to_ascii_lowercase().as_str(), rest) {
            ("exp3ix", None) => LearnerSpec::Exp3Ix,
            ("doubling", None) => LearnerSpec::Doubling,
            ("uniform", None) => LearnerSpec::Uniform,
            ("eoe", Some(r)) => {
                let p: f64 = parse_param(r, "p", s)?;
                if !(p > 0.0 && p <= 2.0) {
                    return Err(LearnerError::Spec(format!("p = {p} outside (0, 2]")));
                }
                LearnerSpec::Eoe { p }
            }
            ("regexp3", Some(r)) if r.starts_with("tau") => {
                let tau: f64 = parse_param(r, "tau", s)?;
                if !(tau > 0.0 && tau.is_finite()) {
                    return Err(LearnerError::Spec(format!("tau = {tau} must be positive")));
                }
                LearnerSpec::RegExp3Tau { tau }
            }
            ("regexp3", Some(r)) => {
                let horizon: u64 = parse_param(r, "T", s)?;
                if horizon == 0 {
                    return Err(LearnerError::Spec("horizon T must be at least 1".into()));
                }
                LearnerSpec::RegExp3Horizon { horizon }
            }
            ("fixed", Some(r)) => {
                let probs = r
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| LearnerError::Spec(format!("cannot parse probabilities in `{s}`")))?;
                Policy::new(probs.clone())?;
                LearnerSpec::Fixed(probs)
            }
            _ => return Err(LearnerError::Spec(format!("unknown learner `{s}`"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerSpec::Exp3Ix => write!(f, "exp3ix"),
            LearnerSpec::Eoe { p } => write!(f, "eoe:p={p}"),
            LearnerSpec::RegExp3Horizon { horizon } => write!(f, "regexp3:T={horizon}"),
            LearnerSpec::RegExp3Tau { tau } => write!(f, "regexp3:tau={tau}"),
            LearnerSpec::Doubling => write!(f, "doubling"),
            LearnerSpec::Uniform => write!(f, "uniform"),
            LearnerSpec::Fixed(probs) => {
                let parts: Vec<String> = probs.iter().map(|p| p.to_string()).collect();
                write!(f, "fixed:{}", parts.join(","))
            }
        }
    }
}
