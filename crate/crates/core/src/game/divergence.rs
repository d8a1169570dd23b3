use super::{Policy, Profile};
use crate::numerics::ln1p_minus_x;

/// `KL(p, q) = sum_a p(a) log(p(a) / q(a))` with `0 log 0 = 0`.
///
/// Returns `f64::INFINITY` when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &Policy, q: &Policy) -> f64 {
    assert_eq!(p.len(), q.len(), "KL between policies of different sizes");
    let mut total = 0.0;
    for (&pa, &qa) in p.probs().iter().zip(q.probs()) {
        if pa == 0.0 {
            continue;
        }
        if qa == 0.0 {
            return f64::INFINITY;
        }
        total += pa * (pa / qa).ln();
    }
    total.max(0.0)
}

/// KL divergence between `Bernoulli(p)` and `Bernoulli(q)`.
///
/// Written as a sum of second-order terms so that it stays accurate when
/// `p` and `q` are very close.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q), "Bernoulli parameters must lie in [0, 1]");
    if p == q {
        return 0.0;
    }
    if (q == 0.0 && p > 0.0) || (q == 1.0 && p < 1.0) {
        return f64::INFINITY;
    }
    if p == 0.0 {
        return -(1.0 - q).ln();
    }
    if p == 1.0 {
        return -q.ln();
    }
    // KL = p f(x) + (1-p) f(y) + (p-q)^2 / (q(1-q)),  f(z) = ln(1+z) - z.
    let d = p - q;
    let x = d / q;
    let y = -d / (1.0 - q);
    (p * ln1p_minus_x(x) + (1.0 - p) * ln1p_minus_x(y) + d * d / (q * (1.0 - q))).max(0.0)
}

/// Bregman divergence of the product entropy: `KL(mu, mu') + KL(nu, nu')`.
pub fn bregman_distance(w: &Profile, w_prime: &Profile) -> f64 {
    kl_divergence(&w.min_policy, &w_prime.min_policy) + kl_divergence(&w.max_policy, &w_prime.max_policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_bernoulli(p: f64, q: f64) -> f64 {
        p * (p / q).ln() + (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln()
    }

    #[test]
    fn identical_policies_have_zero_divergence() {
        let p = Policy::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(kl_divergence(&p, &p), 0.0);
        let w = Profile::new(p.clone(), Policy::uniform(2));
        assert_eq!(bregman_distance(&w, &w), 0.0);
    }

    #[test]
    fn bernoulli_closed_form() {
        let expected = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((bernoulli_kl(0.5, 0.25) - expected).abs() < 1e-15);
        assert!((bernoulli_kl(0.5, 0.25) - 0.143_841_036_225_890_4).abs() < 1e-15);
        let as_policy = kl_divergence(&Policy::new(vec![0.5, 0.5]).unwrap(), &Policy::new(vec![0.25, 0.75]).unwrap());
        assert!((as_policy - expected).abs() < 1e-15);
    }

    #[test]
    fn bernoulli_matches_naive_away_from_cancellation() {
        for &(p, q) in &[(0.1, 0.7), (2.0 / 3.0, 7.0 / 12.0), (0.9, 0.2), (0.5, 0.5001)] {
            let naive = naive_bernoulli(p, q);
            assert!((bernoulli_kl(p, q) - naive).abs() < 1e-13 * naive.max(1e-3), "{p} {q}");
        }
    }

    #[test]
    fn bernoulli_tiny_gap_is_second_order() {
        let q = 0.4;
        let d = 1e-9;
        let approx = d * d / (2.0 * q * (1.0 - q));
        let v = bernoulli_kl(q + d, q);
        assert!(((v - approx) / approx).abs() < 1e-6, "{v} vs {approx}");
    }

    #[test]
    fn support_violation_is_infinite() {
        let p = Policy::new(vec![0.5, 0.5]).unwrap();
        let q = Policy::point_mass(2, 0);
        assert_eq!(kl_divergence(&p, &q), f64::INFINITY);
        assert!(kl_divergence(&q, &p).is_finite());
        assert_eq!(bernoulli_kl(0.5, 0.0), f64::INFINITY);
    }

    #[test]
    fn near_vertex_bregman_is_finite() {
        let u = Profile::uniform(2, 2);
        let near =
            Profile::new(Policy::new(vec![1.0 - 1e-9, 1e-9]).unwrap(), Policy::new(vec![1.0 - 1e-9, 1e-9]).unwrap());
        let d = bregman_distance(&u, &near);
        let direct = 2.0 * (0.5 * (0.5f64 / (1.0 - 1e-9)).ln() + 0.5 * (0.5f64 / 1e-9).ln());
        assert!(d.is_finite());
        assert!((d - direct).abs() < 1e-12);
    }
}
