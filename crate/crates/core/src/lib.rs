//! Uncoupled learning in two-player zero-sum matrix games under bandit feedback.
//!
//! The crate is split into four layers:
//!
//! - [`game`]: matrix games, simplex policies, exploitability, divergences, the
//!   entropy-regularized game and its equilibrium oracle, and the 2x2 hard-instance
//!   family used for lower-bound accounting.
//! - [`learners`]: per-player state machines (EXP3-IX, regularized EXP3, the
//!   explore-or-exploit wrapper and the doubling meta-procedure) behind a common
//!   act/observe contract that never exposes the opponent's action.
//! - [`harness`]: episode runner, seeded Monte Carlo replications, L^p curve
//!   estimation, rate fits and KL-budget accounting.
//! - [`cli`] and [`verify`]: configuration, experiment commands and the named
//!   verification suites driven by the `lastiter` binary.

pub mod cli;
pub mod game;
pub mod harness;
pub mod learners;
pub mod numerics;
pub mod verify;

pub use game::{GameError, LossMode, MatrixGame, Policy, Profile, RegularizedGame};
pub use harness::{EpisodeTrace, HarnessError, RateCurve, RateFit};
pub use learners::{Learner, LearnerError, LearnerSpec, SharedSeed, Side};
