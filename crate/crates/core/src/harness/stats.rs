//! L^p estimation, rate fits and checkpoint grids.

use super::HarnessError;

/// Mean and standard error of the mean.
///
/// The mean is accumulated around the first sample, so a constant sample
/// returns that constant exactly with zero error.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let x0 = xs[0];
    let shift: f64 = xs.iter().map(|x| x - x0).sum::<f64>() / n as f64;
    let mean = x0 + shift;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - x0 - shift).powi(2)).sum();
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}

fn pow_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

fn root_p(m: f64, p: f64) -> f64 {
    if p == 1.0 {
        m
    } else if p == 2.0 {
        m.sqrt()
    } else {
        m.powf(1.0 / p)
    }
}

/// Plug-in estimate `(mean |x|^p)^(1/p)` with a delta-method standard error.
pub fn lp_estimate(values: &[f64], p: f64) -> (f64, f64) {
    let powered: Vec<f64> = values.iter().map(|x| pow_p(x.abs(), p)).collect();
    let (m, se_m) = mean_and_stderr(&powered);
    let est = root_p(m, p);
    if values.len() < 2 || m <= 0.0 {
        return (est, 0.0);
    }
    (est, est / (p * m) * se_m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub t: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub reps: usize,
}

/// Empirical `||EG||_p` against round index.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub p: f64,
    pub points: Vec<CurvePoint>,
}

impl RateCurve {
    pub fn last(&self) -> Option<&CurvePoint> {
        self.points.last()
    }

    pub fn at(&self, t: u64) -> Option<&CurvePoint> {
        self.points.iter().find(|c| c.t == t)
    }
}

/// Least-squares fit of `log(estimate)` on `log(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub t_min: u64,
    pub t_max: u64,
    pub points: usize,
}

/// Fits a power law to the curve points with `t >= t_min`.
pub fn fit_rate(curve: &RateCurve, t_min: f64) -> Result<RateFit, HarnessError> {
    let pts: Vec<&CurvePoint> = curve.points.iter().filter(|c| c.t as f64 >= t_min).collect();
    if pts.len() < 3 {
        return Err(HarnessError::InsufficientData(format!("{} checkpoints at or above t = {t_min}", pts.len())));
    }
    if let Some(c) = pts.iter().find(|c| !(c.estimate > 0.0)) {
        return Err(HarnessError::InsufficientData(format!("nonpositive estimate {} at t = {}", c.estimate, c.t)));
    }
    let xs: Vec<f64> = pts.iter().map(|c| (c.t as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|c| c.estimate.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(HarnessError::InsufficientData("checkpoints share one t".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_stderr = if pts.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(RateFit { slope, intercept, slope_stderr, t_min: pts[0].t, t_max: pts[pts.len() - 1].t, points: pts.len() })
}

/// Rounded powers of `ratio` up to `horizon`, always ending at `horizon`.
pub fn geometric_checkpoints(horizon: u64, ratio: f64) -> Result<Vec<u64>, HarnessError> {
    if horizon == 0 {
        return Err(HarnessError::InvalidConfig("horizon must be at least 1".into()));
    }
    if !(ratio > 1.0 && ratio.is_finite()) {
        return Err(HarnessError::InvalidConfig(format!("checkpoint ratio {ratio} must exceed 1")));
    }
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let t = ratio.powi(k).round() as u64;
        if t >= horizon {
            break;
        }
        if out.last() != Some(&t) {
            out.push(t);
        }
        k += 1;
    }
    out.push(horizon);
    Ok(out)
}

/// `n` log-spaced integer points from `t_min` to `t_max` inclusive, deduplicated.
pub fn geometric_grid(t_min: u64, t_max: u64, n: usize) -> Result<Vec<u64>, HarnessError> {
    if t_min == 0 || t_max < t_min || n < 2 {
        return Err(HarnessError::InvalidConfig(format!("bad grid {t_min}..{t_max} with {n} points")));
    }
    let (lo, hi) = ((t_min as f64).ln(), (t_max as f64).ln());
    let mut out: Vec<u64> = (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp().round() as u64)
        .map(|t| t.clamp(t_min, t_max))
        .collect();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(f: impl Fn(f64) -> f64) -> RateCurve {
        let points = geometric_checkpoints(100_000, 10f64.sqrt())
            .unwrap()
            .into_iter()
            .map(|t| CurvePoint { t, estimate: f(t as f64), stderr: 0.0, reps: 1 })
            .collect();
        RateCurve { p: 2.0, points }
    }

    #[test]
    fn recovers_planted_slopes() {
        for &(c, e) in &[(0.7, -0.25), (3.0, -0.5), (0.2, 0.0)] {
            let fit = fit_rate(&curve(|t| c * t.powf(e)), 1.0).unwrap();
            assert!((fit.slope - e).abs() < 1e-9, "{} vs {e}", fit.slope);
            assert!((fit.intercept - f64::ln(c)).abs() < 1e-9);
            assert!(fit.slope_stderr < 1e-9);
        }
    }

    #[test]
    fn fit_needs_three_positive_points() {
        let c = curve(|t| t.powf(-0.5));
        assert!(fit_rate(&c, 50_000.0).is_err());
        let mut z = curve(|_| 1.0);
        z.points[3].estimate = 0.0;
        assert!(fit_rate(&z, 1.0).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(geometric_checkpoints(1000, 10.0).unwrap(), vec![1, 10, 100, 1000]);
        assert_eq!(geometric_checkpoints(1, 10.0).unwrap(), vec![1]);
        let g = geometric_checkpoints(10_000, 10f64.sqrt()).unwrap();
        assert_eq!(g, vec![1, 3, 10, 32, 100, 316, 1000, 3162, 10_000]);
        let h = geometric_grid(10, 20_544, 20).unwrap();
        assert_eq!(h.len(), 20);
        assert_eq!((h[0], h[19]), (10, 20_544));
        assert!(h.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lp_estimates() {
        let (est, se) = lp_estimate(&[0.3], 2.0);
        assert_eq!((est, se), (0.3, 0.0));
        let (est, se) = lp_estimate(&[0.125; 7], 2.0);
        assert_eq!((est, se), (0.125, 0.0));
        let (est, _) = lp_estimate(&[0.0, 0.0], 1.5);
        assert_eq!(est, 0.0);
        let (est, se) = lp_estimate(&[0.1, 0.3, 0.2, 0.4], 2.0);
        assert!((est - (0.075f64).sqrt()).abs() < 1e-15);
        // Delta method by hand: sd of squares / sqrt(n) / (2 sqrt(m)).
        let sq = [0.01, 0.09, 0.04, 0.16];
        let var = sq.iter().map(|x| (x - 0.075f64).powi(2)).sum::<f64>() / 3.0;
        assert!((se - (var / 4.0).sqrt() / (2.0 * 0.075f64.sqrt())).abs() < 1e-15);
    }
}
