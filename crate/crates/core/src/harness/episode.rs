use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::seeds::splitmix64;
use super::HarnessError;
use crate::game::{exploitability_gap, kl_divergence, MatrixGame, Profile};
use crate::learners::{Learner, LearnerSpec, SharedSeed, Side};

/// What to record besides the sampled actions.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    /// Keep one [`RoundRecord`] per round (EG is computed every round).
    pub record_rounds: bool,
    /// Rounds at which full profiles are stored, in increasing order.
    pub checkpoints: Vec<u64>,
    /// Regularized equilibrium for KL diagnostics of the mirror iterates.
    pub reg_star: Option<Profile>,
    /// Record `nu(0) - 1/2` each round.
    pub record_delta: bool,
}

impl Diagnostics {
    pub fn checkpoints(checkpoints: Vec<u64>) -> Self {
        Self { checkpoints, ..Self::default() }
    }

    pub fn full() -> Self {
        Self { record_rounds: true, ..Self::default() }
    }
}

/// Per-round record. Action indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: u64,
    pub eg: Option<f64>,
    pub delta: Option<f64>,
    pub kl_star: Option<f64>,
    pub a: usize,
    pub b: usize,
    pub loss: f64,
}

/// Profiles stored at a checkpoint round `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub t: u64,
    /// Profile sampled from at round `t`.
    pub played: Profile,
    /// Recommendations after observing round `t`.
    pub output: Profile,
    pub eg: f64,
    pub output_eg: f64,
    /// Mirror iterates used to form the round-`t` policies, when both sides keep one.
    pub mirror: Option<Profile>,
    pub kl_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub seed: u64,
    pub horizon: u64,
    pub min_spec: Option<String>,
    pub max_spec: Option<String>,
    pub rounds: Vec<RoundRecord>,
    pub checkpoints: Vec<Checkpoint>,
}

/// Shared uniform draw for an episode seed, from a stream separate from sampling.
pub fn shared_seed_for(seed: u64) -> SharedSeed {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0xD1B5_4A32_D192_ED03));
    SharedSeed::new(rng.gen::<f64>()).expect("gen::<f64>() lies in [0, 1)")
}

fn mirror_profile(min: &dyn Learner, max: &dyn Learner) -> Option<Profile> {
    Some(Profile::new(min.mirror_iterate()?, max.mirror_iterate()?))
}

fn kl_star(reg_star: &Profile, mirror: &Profile) -> f64 {
    kl_divergence(&reg_star.min_policy, &mirror.min_policy) + kl_divergence(&reg_star.max_policy, &mirror.max_policy)
}

/// Plays `horizon` rounds of the bandit protocol between two learners.
///
/// Each learner sees only its own sampled action and the common scalar loss.
pub fn run_episode(
    game: &MatrixGame,
    min: &mut dyn Learner,
    max: &mut dyn Learner,
    horizon: u64,
    seed: u64,
    diag: &Diagnostics,
) -> Result<EpisodeTrace, HarnessError> {
    let (a_n, b_n) = game.dims();
    if min.num_actions() != a_n {
        return Err(HarnessError::DimensionMismatch { expected: a_n, got: min.num_actions() });
    }
    if max.num_actions() != b_n {
        return Err(HarnessError::DimensionMismatch { expected: b_n, got: max.num_actions() });
    }
    if horizon == 0 {
        return Err(HarnessError::InvalidConfig("horizon must be at least 1".into()));
    }
    if diag.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::InvalidConfig("checkpoints must be strictly increasing".into()));
    }
    if let Some(&t) = diag.checkpoints.iter().find(|&&t| t == 0 || t > horizon) {
        return Err(HarnessError::InvalidConfig(format!("checkpoint {t} outside 1..={horizon}")));
    }
    if let Some(star) = &diag.reg_star {
        if star.dims() != (a_n, b_n) {
            return Err(HarnessError::InvalidConfig("reg_star dimensions differ from the game".into()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds = Vec::with_capacity(if diag.record_rounds { horizon as usize } else { 0 });
    let mut checkpoints = Vec::with_capacity(diag.checkpoints.len());
    let mut next_cp = diag.checkpoints.iter().copied().peekable();

    for t in 1..=horizon {
        let at_checkpoint = next_cp.peek() == Some(&t);
        let need_mirror = diag.reg_star.is_some() && (at_checkpoint || diag.record_rounds);
        let mirror = if need_mirror || at_checkpoint { mirror_profile(&*min, &*max) } else { None };

        let mu = min.act();
        let nu = max.act();
        let a = mu.sample_with(rng.gen::<f64>());
        let b = nu.sample_with(rng.gen::<f64>());
        let delta = diag.record_delta.then(|| nu.prob(0) - 0.5);
        let played =
            if at_checkpoint || diag.record_rounds { Some(Profile::new(mu.clone(), nu.clone())) } else { None };
        let loss = game.sample_loss(a, b, &mut rng);

        min.observe(a, loss)?;
        max.observe(b, loss)?;

        let eg = match &played {
            Some(w) => Some(exploitability_gap(game, w)?),
            None => None,
        };
        let kl = match (&diag.reg_star, &mirror) {
            (Some(star), Some(m)) => Some(kl_star(star, m)),
            _ => None,
        };
        if diag.record_rounds {
            rounds.push(RoundRecord { t, eg, delta, kl_star: kl, a, b, loss });
        }
        if at_checkpoint {
            next_cp.next();
            let output = Profile::new(min.output(), max.output());
            let output_eg = exploitability_gap(game, &output)?;
            checkpoints.push(Checkpoint {
                t,
                played: played.expect("stored at checkpoints"),
                output,
                eg: eg.expect("computed at checkpoints"),
                output_eg,
                mirror,
                kl_star: kl,
            });
        }
    }

    Ok(EpisodeTrace { seed, horizon, min_spec: None, max_spec: None, rounds, checkpoints })
}

/// Builds both learners from specifications and runs one episode.
///
/// The shared seed handed to both learners is derived from `seed`.
pub fn run_episode_from_specs(
    game: &MatrixGame,
    min_spec: &LearnerSpec,
    max_spec: &LearnerSpec,
    horizon: u64,
    seed: u64,
    diag: &Diagnostics,
) -> Result<EpisodeTrace, HarnessError> {
    let dims = game.dims();
    let shared = shared_seed_for(seed);
    let mut min = min_spec.build(Side::Min, dims, shared)?;
    let mut max = max_spec.build(Side::Max, dims, shared)?;
    let mut trace = run_episode(game, min.as_mut(), max.as_mut(), horizon, seed, diag)?;
    trace.min_spec = Some(min_spec.to_string());
    trace.max_spec = Some(max_spec.to_string());
    Ok(trace)
}

/// `KL(w_star, w_t)` at each checkpoint, equilibrium first.
pub fn kl_to_regularized_star(trace: &EpisodeTrace, reg_star: &Profile) -> Result<Vec<(u64, f64)>, HarnessError> {
    if trace.checkpoints.is_empty() {
        return Err(HarnessError::MissingDiagnostics("checkpoint"));
    }
    trace
        .checkpoints
        .iter()
        .map(|c| {
            let mirror = c.mirror.as_ref().ok_or(HarnessError::MissingDiagnostics("mirror iterate"))?;
            if mirror.dims() != reg_star.dims() {
                return Err(HarnessError::InvalidConfig("reg_star dimensions differ from the trace".into()));
            }
            Ok((c.t, kl_star(reg_star, mirror)))
        })
        .collect()
}

impl EpisodeTrace {
    pub fn checkpoint(&self, t: u64) -> Option<&Checkpoint> {
        self.checkpoints.iter().find(|c| c.t == t)
    }
}
