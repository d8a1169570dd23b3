//! Named verification suites: exact-enumeration oracles, inequality
//! certificates and Monte Carlo bound checks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{
    exploitability_gap, hard_instance, kl_divergence, reward_vector_law, LossMode, MatrixGame, Policy, Profile,
    RegularizedGame, REG_EQ_DEFAULT_TOL,
};
use crate::harness::{
    fit_rate, geometric_checkpoints, geometric_grid, kl_budget, lower_bound_epsilon, lower_bound_experiment,
    mean_and_stderr, monte_carlo_checkpoints, monte_carlo_lp, run_episode_from_specs, splitmix64, write_curve_csv,
    Diagnostics, EgTarget, HarnessError, McConfig, RateCurve,
};
use crate::learners::{
    doubling_prob, doubling_schedule, importance_estimate, regexp3_descent, regexp3_mix, BernoulliScheduler, Exp3Ix,
    Learner, LearnerSpec, RegExp3, SharedSeed, Side,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckKind {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

/// One verified inequality with its measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub kind: CheckKind,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, kind: CheckKind::AtMost(bound) }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, kind: CheckKind::AtLeast(bound) }
    }

    pub fn within(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), measured, kind: CheckKind::Within(lo, hi) }
    }

    /// Signed distance to the boundary; nonnegative iff the check passes.
    pub fn margin(&self) -> f64 {
        match self.kind {
            CheckKind::AtMost(b) => b - self.measured,
            CheckKind::AtLeast(b) => self.measured - b,
            CheckKind::Within(lo, hi) => (self.measured - lo).min(hi - self.measured),
        }
    }

    pub fn passed(&self) -> bool {
        self.margin() >= 0.0
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let bound = match self.kind {
            CheckKind::AtMost(b) => format!("<= {b:.6e}"),
            CheckKind::AtLeast(b) => format!(">= {b:.6e}"),
            CheckKind::Within(lo, hi) => format!("in [{lo}, {hi}]"),
        };
        write!(f, "{status} {}: measured {:.6e}, bound {bound}, margin {:.3e}", self.name, self.measured, self.margin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracles,
    LowerBound,
    KlContraction,
    LastIterate,
    ExploreExploit,
    Doubling,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Oracles,
        Suite::LowerBound,
        Suite::KlContraction,
        Suite::LastIterate,
        Suite::ExploreExploit,
        Suite::Doubling,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Oracles => "oracles",
            Suite::LowerBound => "lowerbound",
            Suite::KlContraction => "kl-contraction",
            Suite::LastIterate => "last-iterate",
            Suite::ExploreExploit => "eoe",
            Suite::Doubling => "doubling",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    /// Accepts the canonical names and the short aliases `lemma2`, `thm3`,
    /// `thm2` and `thm4` used by older scripts.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let alias = match s {
            "lemma2" => Some(Suite::KlContraction),
            "thm3" => Some(Suite::LastIterate),
            "thm2" => Some(Suite::ExploreExploit),
            "thm4" => Some(Suite::Doubling),
            _ => None,
        };
        alias.or_else(|| Suite::ALL.into_iter().find(|suite| suite.to_string() == s)).ok_or_else(|| {
            format!("unknown suite `{s}` (expected one of oracles, lowerbound, kl-contraction, last-iterate, eoe, doubling)")
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub master_seed: u64,
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { master_seed: 20_240_917, threads: None }
    }
}

impl VerifyOptions {
    fn seed(&self, salt: u64) -> u64 {
        splitmix64(self.master_seed ^ splitmix64(salt))
    }

    fn mc(&self, horizon: u64, reps: usize, p: f64, checkpoints: Vec<u64>, salt: u64) -> McConfig {
        let mut cfg = McConfig::new(horizon, reps, p, checkpoints, self.seed(salt));
        cfg.threads = self.threads;
        cfg
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    match suite {
        Suite::Oracles => {
            let mut checks = estimator_unbiasedness(opts.master_seed);
            checks.extend(second_order_bound(opts.master_seed));
            checks.extend(scheduler_checks());
            checks.extend(property_checks(opts)?);
            Ok(checks)
        }
        Suite::LowerBound => lower_bound_checks(opts),
        Suite::KlContraction => kl_contraction_checks(opts),
        Suite::LastIterate => last_iterate_checks(opts),
        Suite::ExploreExploit => explore_exploit_checks(opts),
        Suite::Doubling => doubling_checks(opts),
    }
}

fn random_policy(rng: &mut ChaCha8Rng, k: usize) -> Policy {
    Policy::from_unnormalized((0..k).map(|_| rng.gen_range(0.05..1.0)).collect())
}

fn random_game(rng: &mut ChaCha8Rng, a: usize, b: usize) -> MatrixGame {
    let rows = (0..a).map(|_| (0..b).map(|_| rng.gen::<f64>()).collect()).collect();
    MatrixGame::new(rows, LossMode::Bernoulli).expect("entries in [0, 1)")
}

/// Outcomes `(a, b, loss, probability)` of one Bernoulli round.
fn outcomes(game: &MatrixGame, mu: &Policy, nu: &Policy) -> Vec<(usize, usize, f64, f64)> {
    let (a_n, b_n) = game.dims();
    let mut out = Vec::with_capacity(2 * a_n * b_n);
    for a in 0..a_n {
        for b in 0..b_n {
            let m = game.entry(a, b);
            let w = mu.prob(a) * nu.prob(b);
            out.push((a, b, 1.0, w * m));
            out.push((a, b, 0.0, w * (1.0 - m)));
        }
    }
    out
}

/// Exact expectation of both importance estimators against the true vectors.
pub fn estimator_unbiasedness(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 1));
    let (mut err_min, mut err_max) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (a_n, b_n) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let game = random_game(&mut rng, a_n, b_n);
        let mu = random_policy(&mut rng, a_n);
        let nu = random_policy(&mut rng, b_n);
        let mut e_min = vec![0.0; a_n];
        let mut e_max = vec![0.0; b_n];
        for (a, b, loss, w) in outcomes(&game, &mu, &nu) {
            let est_min = importance_estimate(loss, a, &mu, Side::Min).expect("full support");
            let est_max = importance_estimate(loss, b, &nu, Side::Max).expect("full support");
            e_min.iter_mut().zip(&est_min).for_each(|(e, x)| *e += w * x);
            e_max.iter_mut().zip(&est_max).for_each(|(e, x)| *e += w * x);
        }
        for (a, e) in e_min.iter().enumerate() {
            let truth: f64 = (0..b_n).map(|b| game.entry(a, b) * nu.prob(b)).sum();
            err_min = err_min.max((e - truth).abs());
        }
        for (b, e) in e_max.iter().enumerate() {
            let truth: f64 = 1.0 - (0..a_n).map(|a| game.entry(a, b) * mu.prob(a)).sum::<f64>();
            err_max = err_max.max((e - truth).abs());
        }
    }
    vec![
        Check::at_most("unbiased min-side estimator, max abs error", err_min, 1e-12),
        Check::at_most("unbiased max-side estimator, max abs error", err_max, 1e-12),
    ]
}

/// Exact `E KL(mu, descent(mu, est, eta)) <= eta^2 K / 2` on random states,
/// reported as the largest ratio to the bound.
pub fn second_order_bound(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 2));
    let etas = [0.01, 0.1, 0.5];
    let mut worst = [[0.0f64; 2]; 3];
    for _ in 0..100 {
        let (a_n, b_n) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let game = random_game(&mut rng, a_n, b_n);
        let mu = random_policy(&mut rng, a_n);
        let nu = random_policy(&mut rng, b_n);
        for (k, &eta) in etas.iter().enumerate() {
            let (mut kl_min, mut kl_max) = (0.0, 0.0);
            for (a, b, loss, w) in outcomes(&game, &mu, &nu) {
                let est = importance_estimate(loss, a, &mu, Side::Min).expect("full support");
                kl_min += w * kl_divergence(&mu, &regexp3_descent(&mu, &est, eta).expect("eta > 0"));
                let est = importance_estimate(loss, b, &nu, Side::Max).expect("full support");
                kl_max += w * kl_divergence(&nu, &regexp3_descent(&nu, &est, eta).expect("eta > 0"));
            }
            worst[k][0] = worst[k][0].max(kl_min / (eta * eta * a_n as f64 / 2.0));
            worst[k][1] = worst[k][1].max(kl_max / (eta * eta * b_n as f64 / 2.0));
        }
    }
    let mut checks = Vec::new();
    for (k, eta) in etas.iter().enumerate() {
        checks.push(Check::at_most(format!("second-order bound, min side, eta={eta}, max ratio"), worst[k][0], 1.0));
        checks.push(Check::at_most(format!("second-order bound, max side, eta={eta}, max ratio"), worst[k][1], 1.0));
    }
    checks
}

fn doubling_sequence(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut i = 1;
    while out.len() < len {
        let (t_i, _) = doubling_schedule(i).expect("loop index in range");
        for j in 1..=t_i {
            if out.len() == len {
                break;
            }
            out.push(doubling_prob(i, j).expect("round within loop"));
        }
        i += 1;
    }
    out
}

/// Shared-seed scheduler: running-count inequality and grid mean.
pub fn scheduler_checks() -> Vec<Check> {
    let horizon = 10_000;
    let sequences: [(&str, Vec<f64>); 3] = [
        ("constant 0.5", vec![0.5; horizon]),
        ("t^(-1/2)", (1..=horizon).map(|t| (t as f64).powf(-0.5)).collect()),
        ("doubling", doubling_sequence(horizon)),
    ];
    let grid = 1000;
    let mut checks = Vec::new();
    for (name, probs) in sequences {
        let mut min_slack = f64::INFINITY;
        let mut fired = vec![0u32; horizon];
        for k in 0..grid {
            let seed = SharedSeed::new(k as f64 / grid as f64).expect("grid point in [0, 1)");
            let mut sched = BernoulliScheduler::new(seed);
            let mut count = 0u64;
            for (t, &p) in probs.iter().enumerate() {
                if sched.step(p).expect("probability in [0, 1]") {
                    count += 1;
                    fired[t] += 1;
                }
                min_slack = min_slack.min(count as f64 - sched.cumulative().floor());
            }
        }
        let max_dev = fired.iter().zip(&probs).map(|(&n, p)| (n as f64 / grid as f64 - p).abs()).fold(0.0, f64::max);
        checks.push(Check::at_least(
            format!("scheduler count minus floor(s_t), {name}, min over grid"),
            min_slack,
            0.0,
        ));
        checks.push(Check::at_most(format!("scheduler grid mean vs p_t, {name}, max deviation"), max_dev, 2e-3));
    }
    checks
}

fn byte_identical_curves(opts: &VerifyOptions) -> Result<Check, HarnessError> {
    let game = hard_instance(0.03)?;
    let specs: [LearnerSpec; 3] = ["regexp3:T=2000".parse()?, "eoe:p=2".parse()?, "doubling".parse()?];
    let mut mismatches = 0;
    for (k, spec) in specs.iter().enumerate() {
        let mut cfg = opts.mc(2000, 16, 2.0, geometric_checkpoints(2000, 10f64.sqrt())?, 90 + k as u64);
        let mut bytes = Vec::new();
        for threads in [1, 4, 1] {
            cfg.threads = Some(threads);
            let curve = monte_carlo_lp(&game, spec, spec, &cfg)?;
            let mut buf = Vec::new();
            write_curve_csv(&curve, &mut buf)?;
            bytes.push(buf);
        }
        mismatches += bytes.windows(2).filter(|w| w[0] != w[1]).count();
    }
    Ok(Check::at_most("rerun curves byte-identical across 1 and 4 workers, mismatches", mismatches as f64, 0.0))
}

/// Policy validity under long runs, EG Lipschitz, Pinsker, mixing identity, reproducibility.
pub fn property_checks(opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed(3));
    let mut checks = Vec::new();

    let steps = 1_000_000;
    let mut learners: Vec<(&str, Box<dyn Learner>)> = vec![
        ("regexp3", Box::new(RegExp3::for_horizon(Side::Min, (4, 3), steps)?)),
        ("exp3ix", Box::new(Exp3Ix::new(Side::Max, 3)?)),
    ];
    for (name, learner) in &mut learners {
        let (mut norm_err, mut min_prob) = (0.0f64, f64::INFINITY);
        for _ in 0..steps {
            let policy = learner.act();
            norm_err = norm_err.max((policy.probs().iter().sum::<f64>() - 1.0).abs());
            min_prob = policy.probs().iter().copied().fold(min_prob, f64::min);
            let a = policy.sample_with(rng.gen());
            learner.observe(a, rng.gen())?;
        }
        checks.push(Check::at_most(format!("{name} policy normalization after {steps} steps"), norm_err, 1e-12));
        checks.push(Check::at_least(
            format!("{name} smallest policy entry after {steps} steps"),
            min_prob,
            f64::MIN_POSITIVE,
        ));
    }

    let mut lipschitz = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let (a_n, b_n) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let game = random_game(&mut rng, a_n, b_n);
        let w = Profile::new(random_policy(&mut rng, a_n), random_policy(&mut rng, b_n));
        let v = Profile::new(random_policy(&mut rng, a_n), random_policy(&mut rng, b_n));
        let diff = (exploitability_gap(&game, &w)? - exploitability_gap(&game, &v)?).abs();
        lipschitz = lipschitz.max(diff - w.l1_distance(&v));
    }
    checks.push(Check::at_most("EG Lipschitz excess |EG(w)-EG(v)| - |w-v|_1, max", lipschitz, 1e-12));

    let mut pinsker = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let k = rng.gen_range(2..=6);
        let p = random_policy(&mut rng, k);
        let q = random_policy(&mut rng, k);
        pinsker = pinsker.max(0.5 * p.l1_distance(&q).powi(2) - kl_divergence(&p, &q));
    }
    checks.push(Check::at_most("Pinsker excess |p-q|_1^2/2 - KL(p,q), max", pinsker, 1e-12));

    let mut log_odds = 0.0f64;
    for _ in 0..10_000 {
        let k = rng.gen_range(2..=6);
        let mirror = random_policy(&mut rng, k);
        let anchor = random_policy(&mut rng, k);
        let c: f64 = rng.gen();
        let mixed = regexp3_mix(&mirror, &anchor, c)?;
        for i in 1..k {
            let lhs = (mixed.prob(0) / mixed.prob(i)).ln();
            let rhs = (1.0 - c) * (mirror.prob(0) / mirror.prob(i)).ln() + c * (anchor.prob(0) / anchor.prob(i)).ln();
            log_odds = log_odds.max((lhs - rhs).abs());
        }
    }
    checks.push(Check::at_most("geometric mixing log-odds identity, max deviation", log_odds, 1e-12));

    checks.push(byte_identical_curves(opts)?);
    Ok(checks)
}

/// Hard-instance construction, KL budget certificates and static-Nash exploitability.
pub fn lower_bound_checks(opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    let mut checks = Vec::new();

    let n = 100;
    let mut law_err = 0.0f64;
    for i in 0..n {
        let eps = -1.0 / 12.0 + (1.0 / 6.0) * i as f64 / (n - 1) as f64;
        let game = hard_instance(eps)?;
        for j in 0..n {
            let delta = -0.5 + j as f64 / (n - 1) as f64;
            let nu = Policy::new(vec![0.5 + delta, 0.5 - delta])?;
            let direct = game.loss_vector(&nu)?;
            let (r0, r1) = reward_vector_law(eps, delta)?;
            law_err = law_err.max((direct[0] - r0).abs()).max((direct[1] - r1).abs());
        }
    }
    checks.push(Check::at_most("reward vector law vs M_eps nu on 100x100 grid, max abs error", law_err, 1e-15));

    let horizon = 2000;
    let null = hard_instance(0.0)?;
    let diag = Diagnostics { record_rounds: true, record_delta: true, ..Diagnostics::default() };
    let epsilons =
        [lower_bound_epsilon(horizon, 2.0), lower_bound_epsilon(horizon, 0.5), 0.01, 1.0 / 12.0, -1.0 / 12.0];
    let (mut traces, mut violations, mut worst_ratio) = (0, 0, 0.0f64);
    for (k, spec) in ["exp3ix", "eoe:p=2", "eoe:p=0.5", "regexp3:T=2000", "doubling", "uniform"].iter().enumerate() {
        let spec: LearnerSpec = spec.parse()?;
        for r in 0..10 {
            let seed = opts.seed(400 + 16 * k as u64 + r);
            let trace = run_episode_from_specs(&null, &spec, &spec, horizon, seed, &diag)?;
            for &eps in &epsilons {
                traces += 1;
                match kl_budget(&trace, eps) {
                    Ok(b) if b.bound > 0.0 => worst_ratio = worst_ratio.max(b.budget / b.bound),
                    Ok(_) => {}
                    Err(HarnessError::BudgetExceeded { .. }) => violations += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    checks.push(Check::at_most(
        format!("KL budget above analytic bound, traces out of {traces}"),
        violations as f64,
        0.0,
    ));
    checks.push(Check::at_most("KL budget / analytic bound, max over traces", worst_ratio, 1.0));

    for &p in &[0.5, 1.0, 2.0] {
        let horizon = 10_000;
        let eps = lower_bound_epsilon(horizon, p);
        let uniform = LearnerSpec::Uniform;
        let report = lower_bound_experiment(&uniform, &uniform, p, horizon, 2, opts.seed(500), opts.threads)?;
        checks.push(Check::at_least(
            format!("static Nash worst-case ||EG||_{p} at T={horizon} vs eps_T/2"),
            report.worst,
            eps / 2.0 - 1e-12,
        ));
        checks.push(Check::at_most(format!("static Nash KL budget, p={p}"), report.mean_kl_budget, 0.0));
    }
    Ok(checks)
}

/// A fixed random 3x3 Bernoulli game used by the contraction suite.
pub fn fixed_random_game() -> MatrixGame {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3B3);
    random_game(&mut rng, 3, 3)
}

/// Mean `KL(w_star, w_t)` of regularized EXP3 against `2(A+B)/(tau^2 t)` plus two standard errors.
pub fn kl_contraction_checks(opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    let games = [("M0", hard_instance(0.0)?), ("random 3x3", fixed_random_game())];
    let checkpoints = vec![10, 100, 1000, 10_000];
    let mut checks = Vec::new();
    for (g, (gname, game)) in games.iter().enumerate() {
        let (a_n, b_n) = game.dims();
        for (k, &tau) in [0.2, 0.5].iter().enumerate() {
            let star = RegularizedGame::with_uniform_anchor(game.clone(), tau)?.equilibrium(REG_EQ_DEFAULT_TOL)?;
            let spec = LearnerSpec::RegExp3Tau { tau };
            let cfg = opts.mc(10_000, 200, 2.0, checkpoints.clone(), 40 + 2 * g as u64 + k as u64);
            let diag = Diagnostics { reg_star: Some(star), ..Diagnostics::default() };
            let runs = monte_carlo_checkpoints(game, &spec, &spec, &cfg, &diag)?;
            for (c, &t) in checkpoints.iter().enumerate() {
                let values: Vec<f64> = runs.iter().map(|r| r[c].kl_star.expect("reg_star supplied")).collect();
                let (mean, se) = mean_and_stderr(&values);
                let bound = 2.0 * (a_n + b_n) as f64 / (tau * tau * t as f64) + 2.0 * se;
                checks.push(Check::at_most(format!("KL contraction, {gname}, tau={tau}, t={t}"), mean, bound));
            }
        }
    }
    Ok(checks)
}

fn last_iterate_bound(a: usize, b: usize, t: u64) -> f64 {
    let (a, b) = (a as f64, b as f64);
    3.0 * 2f64.sqrt() * ((a + b) / t as f64).powf(0.25) * (a * b).ln().sqrt()
}

/// Last-iterate `||EG||_2` of horizon-tuned regularized EXP3 and its fitted slope.
pub fn last_iterate_checks(opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    let games = [("M0", hard_instance(0.0)?), ("matching pennies", MatrixGame::matching_pennies())];
    let horizons = [1_000u64, 10_000, 100_000, 1_000_000];
    let mut checks = Vec::new();
    for (g, (gname, game)) in games.iter().enumerate() {
        let (a_n, b_n) = game.dims();
        let mut points = Vec::new();
        for (k, &t) in horizons.iter().enumerate() {
            let spec = LearnerSpec::RegExp3Horizon { horizon: t };
            let cfg = opts.mc(t, 100, 2.0, vec![t], 50 + 8 * g as u64 + k as u64);
            let point = monte_carlo_lp(game, &spec, &spec, &cfg)?.points[0];
            checks.push(Check::at_most(
                format!("||EG||_2 at T={t}, {gname}"),
                point.estimate,
                last_iterate_bound(a_n, b_n, t),
            ));
            points.push(point);
        }
        let fit = fit_rate(&RateCurve { p: 2.0, points }, 0.0)?;
        checks.push(Check::within(format!("log-log slope over T, {gname}"), fit.slope, -0.45, -0.15));
    }
    Ok(checks)
}

fn eoe_bound(a: usize, b: usize, p: f64, t: u64) -> f64 {
    let k = (a + b) as f64;
    let t = t as f64;
    17.0 * k.sqrt() * 2f64.powf(1.0 / p) * t.powf(-1.0 / (2.0 + p)) * (4.0 * k * t * t / p).ln()
}

/// First checkpoint of the fit window for the averaged EXP3-IX curve.
pub const AVERAGE_FIT_T_MIN: u64 = 1000;

/// Explore-or-exploit over EXP3-IX against its `L^p` bound, and the slope of
/// the averaged EXP3-IX profile.
pub fn explore_exploit_checks(opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    let game = hard_instance(0.0)?;
    let (a_n, b_n) = game.dims();
    let horizon = 100_000;
    let grid = geometric_checkpoints(horizon, 10f64.sqrt())?;
    let mut checks = Vec::new();
    for (k, &p) in [1.0, 2.0].iter().enumerate() {
        let spec = LearnerSpec::Eoe { p };
        let cfg = opts.mc(horizon, 100, p, grid.clone(), 60 + k as u64);
        let curve = monte_carlo_lp(&game, &spec, &spec, &cfg)?;
        for c in &curve.points {
            checks.push(Check::at_most(
                format!("||EG||_{p} at t={}, eoe p={p}", c.t),
                c.estimate,
                eoe_bound(a_n, b_n, p, c.t),
            ));
        }
    }
    let spec = LearnerSpec::Exp3Ix;
    let mut cfg = opts.mc(horizon, 100, 2.0, grid, 70);
    cfg.target = EgTarget::Output;
    let curve = monte_carlo_lp(&game, &spec, &spec, &cfg)?;
    let fit = fit_rate(&curve, AVERAGE_FIT_T_MIN as f64)?;
    checks.push(Check::within(
        format!("averaged EXP3-IX log-log slope, t in [{}, {}]", fit.t_min, fit.t_max),
        fit.slope,
        -0.65,
        -0.40,
    ));
    Ok(checks)
}

fn doubling_bound(a: usize, b: usize, t: u64) -> f64 {
    let (a, b, t) = (a as f64, b as f64, t as f64);
    30.0 * ((a + b) / t).powf(0.25) * ((a * b).ln() * t.ln()).sqrt()
}

/// Doubling meta-procedure through six loops against its anytime bound.
pub fn doubling_checks(opts: &VerifyOptions) -> Result<Vec<Check>, HarnessError> {
    let game = hard_instance(0.0)?;
    let (a_n, b_n) = game.dims();
    let horizon: u64 = (1..=6).map(|i| doubling_schedule(i).expect("loop index in range").0).sum();
    let grid = geometric_grid(10, horizon, 20)?;
    let cfg = opts.mc(horizon, 100, 2.0, grid, 80);
    let curve = monte_carlo_lp(&game, &LearnerSpec::Doubling, &LearnerSpec::Doubling, &cfg)?;
    Ok(curve
        .points
        .iter()
        .map(|c| Check::at_most(format!("||EG||_2 at t={}, doubling", c.t), c.estimate, doubling_bound(a_n, b_n, c.t)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_margins() {
        assert!(Check::at_most("x", 1.0, 1.0).passed());
        assert!(!Check::at_most("x", 1.1, 1.0).passed());
        assert!(Check::at_least("x", 2.0, 1.0).passed());
        assert!(!Check::within("x", -0.1, -0.45, -0.15).passed());
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed());
        let line = Check::within("slope", -0.25, -0.45, -0.15).to_string();
        assert!(line.starts_with("PASS slope"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("thm3".parse::<Suite>().unwrap(), Suite::LastIterate);
        assert!("thm5".parse::<Suite>().is_err());
    }

    #[test]
    fn bound_formulas() {
        assert!((last_iterate_bound(2, 2, 10_000) - 0.706_446).abs() < 1e-6);
        assert_eq!(doubling_sequence(70)[64], doubling_prob(2, 1).unwrap());
    }
}
