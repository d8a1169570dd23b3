//! Small numerical helpers shared across modules.

/// Numerically stable `log(sum(exp(x)))`.
///
/// Returns `-inf` for an empty slice or when every entry is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `ln(1 + x) - x`, accurate for small `|x|`.
pub(crate) fn ln1p_minus_x(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        // Alternating series, truncation error below x^7/7.
        let x2 = x * x;
        x2 * (-0.5 + x * (1.0 / 3.0 + x * (-0.25 + x * (0.2 - x / 6.0))))
    } else {
        x.ln_1p() - x
    }
}

/// Dot product of two equal-length slices.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_naive_on_moderate_inputs() {
        let xs = [0.3, -1.2, 2.5];
        let naive = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - naive).abs() < 1e-14);
    }

    #[test]
    fn lse_survives_large_magnitudes() {
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        let v = log_sum_exp(&[-1000.0, -1000.0]);
        assert!((v - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn ln1p_minus_x_branches_agree() {
        for &x in &[-0.5, -1e-2, 2e-3, 0.7] {
            assert!((ln1p_minus_x(x) - (x.ln_1p() - x)).abs() < 1e-15);
        }
        // series branch against a high-order expansion
        let x = 1e-4f64;
        let reference = -x * x / 2.0 + x.powi(3) / 3.0 - x.powi(4) / 4.0 + x.powi(5) / 5.0 - x.powi(6) / 6.0;
        assert!((ln1p_minus_x(x) - reference).abs() < 1e-14 * reference.abs());
    }
}
