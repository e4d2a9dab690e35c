//! Closed-form bound curves and analytic reference quantities that the
//! experiments compare empirical statistics against.

pub mod kac;
pub mod quad;

pub use kac::{expected_count, kac_density};

use crate::laws::CoefficientLaw;
use crate::poly::PolynomialSample;
use statrs::function::gamma::ln_gamma;

/// `exp(-c1 * min(v, w^2))`: the characteristic-function decay curve.
pub fn charfn_bound(w: f64, variance: f64, c1: f64) -> f64 {
    assert!(variance > 0.0);
    (-c1 * variance.min(w * w)).exp()
}

/// Whether a frequency `w` lies in the window where the decay curve is
/// asserted: `|w| <= (1/c2) (1 - x + 1/n)^(-1/2) x^(-c0 n)`, evaluated in
/// logs so the enormous `x^(-c0 n)` never overflows.
pub fn charfn_admissible(w: f64, x: f64, n: usize, c0: f64, c2: f64) -> bool {
    if w == 0.0 {
        return true;
    }
    if x <= 0.0 {
        return true; // the cap is infinite at x = 0
    }
    let log_cap = -c2.ln() - 0.5 * (1.0 - x + 1.0 / n as f64).ln() - c0 * n as f64 * x.ln();
    w.abs().ln() <= log_cap
}

/// The small-ball comparison line `K * lambda` with its validity floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallBallBound {
    pub bound: f64,
    pub floor: f64,
    /// False when `lambda` sits below the floor, where the line is not
    /// asserted.
    pub asserted: bool,
}

/// Evaluate `K * lambda` guarded by the floor below which the theory makes
/// no claim.
pub fn small_ball_bound(lambda: f64, constant: f64, floor: f64) -> SmallBallBound {
    SmallBallBound { bound: constant * lambda, floor, asserted: lambda >= floor }
}

/// Validity floor `max(x^(c0 n) / sqrt(V), exp(-c1 V))` of the small-ball
/// theorem, in log-safe form.
pub fn small_ball_theorem_floor(x: f64, n: usize, variance: f64, c0: f64, c1: f64) -> f64 {
    let first = if x <= 0.0 {
        0.0
    } else {
        (c0 * n as f64 * x.ln() - 0.5 * variance.ln()).exp()
    };
    let second = (-c1 * variance).exp();
    first.max(second)
}

/// Floor `V^(-1/2) n^(-c)` used on the near-one window.
pub fn small_ball_window_floor(variance: f64, n: usize, c: f64) -> f64 {
    variance.powf(-0.5) * (n as f64).powf(-c)
}

/// Exponential tail curve `exp(-c2 t)` for the near-zero maximal count.
pub fn near_zero_tail_bound(t: f64, c2: f64) -> f64 {
    assert!(t >= 0.0 && c2 > 0.0);
    (-c2 * t).exp()
}

/// `|x - y| / |1 - xy|`; `None` on the singular set `xy = 1`.
pub fn pseudo_hyperbolic(x: f64, y: f64) -> Option<f64> {
    let denom = 1.0 - x * y;
    if denom == 0.0 {
        None
    } else {
        Some((x - y).abs() / denom.abs())
    }
}

/// Geometric grid `alpha_j = 1 - C (C' C)^(-j/L) log(n)/n`, `j = 0..=L`,
/// increasing from `1 - C log n / n` to `1 - log n / (C' n)`.
pub fn alpha_grid(n: usize, c: f64, c_prime: f64, levels: usize) -> Vec<f64> {
    assert!(c > 0.0 && c_prime > 1.0 / c && levels >= 1 && n >= 3);
    let log_n = (n as f64).ln();
    (0..=levels)
        .map(|j| 1.0 - c * (c_prime * c).powf(-(j as f64) / levels as f64) * log_n / n as f64)
        .collect()
}

/// Reference slope `(4/pi)(1 - 2/pi)` of the variance growth of the total
/// real-root count.
pub fn maslova_variance_slope() -> f64 {
    use std::f64::consts::PI;
    (4.0 / PI) * (1.0 - 2.0 / PI)
}

/// Deterministic upper bound, via the mean value theorem and Jensen's
/// formula, for `max_j N_j(-r, r)` over all partial sums of the sample:
///
/// `k + log(M_k / k!) / log(R/r) + log(1/c0) / log(R/r)`
///
/// where `k` is the first index with `|xi_k| >= c0` and
/// `M_k = sum_{m=k}^n |xi_m| R^(m-k) m!/(m-k)!`. When no coefficient
/// reaches `c0` the trivial degree bound is returned.
pub fn jensen_root_bound(sample: &PolynomialSample, r: f64, big_r: f64, c0: f64) -> f64 {
    assert!(0.0 < r && r < big_r && big_r < 1.0);
    assert!(c0 > 0.0);
    let n = sample.degree();
    let coeffs = sample.coefficients_f64();
    let Some(k) = coeffs.iter().position(|c| c.abs() >= c0) else {
        return n as f64;
    };
    // log-domain accumulation of M_k
    let ln_r = big_r.ln();
    let mut terms: Vec<f64> = Vec::with_capacity(n + 1 - k);
    for (m, &c) in coeffs.iter().enumerate().skip(k) {
        if c == 0.0 {
            continue;
        }
        let t = c.abs().ln() + (m - k) as f64 * ln_r + ln_gamma((m + 1) as f64)
            - ln_gamma((m - k + 1) as f64);
        terms.push(t);
    }
    let ln_m_k = log_sum_exp(&terms);
    let denom = (big_r / r).ln();
    k as f64 + (ln_m_k - ln_gamma((k + 1) as f64) + (1.0 / c0).ln()) / denom
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// The exact iterated-integral second moment
/// `sum_{j=0}^{n-k} ((j+k)!/j!)^2 (2j)!/(2j+k)! y^(2j+k)`,
/// an equality for independent unit-variance coefficients, evaluated in the
/// log domain so extreme `(n, k)` never overflow.
pub fn iterated_moment_exact(n: usize, k: usize, y: f64) -> f64 {
    assert!(1 <= k && k <= n);
    assert!((0.0..=1.0).contains(&y));
    if y == 0.0 {
        return 0.0;
    }
    let ln_y = y.ln();
    let terms: Vec<f64> = (0..=n - k)
        .map(|j| {
            2.0 * (ln_gamma((j + k + 1) as f64) - ln_gamma((j + 1) as f64))
                + ln_gamma((2 * j + 1) as f64)
                - ln_gamma((2 * j + k + 1) as f64)
                + (2 * j + k) as f64 * ln_y
        })
        .collect();
    log_sum_exp(&terms).exp()
}

/// The three closed-form right-hand sides the iterated moment is compared
/// against: `y^k (n/2)^(k+1)`, `k! sqrt(k) (2(1-y))^-(k+1)`, and the dual
/// `n^(2k+1) (1-x)^k / k!`.
pub fn iterated_bound_curves(n: usize, k: usize, x: f64, y: f64) -> (f64, f64, f64) {
    assert!(1 <= k && k <= n);
    assert!(0.0 <= x && x <= y && y <= 1.0);
    let kf = k as f64;
    let nf = n as f64;
    let branch1 = if y == 0.0 {
        0.0
    } else {
        (kf * y.ln() + (kf + 1.0) * (nf / 2.0).ln()).exp()
    };
    let branch2 = if y >= 1.0 {
        f64::INFINITY
    } else {
        (ln_gamma(kf + 1.0) + 0.5 * kf.ln() - (kf + 1.0) * (2.0 * (1.0 - y)).ln()).exp()
    };
    let dual = if x >= 1.0 {
        0.0
    } else {
        ((2.0 * kf + 1.0) * nf.ln() + kf * (1.0 - x).ln() - ln_gamma(kf + 1.0)).exp()
    };
    (branch1, branch2, dual)
}

/// `E || w (eta1 - eta2) ||^2` over the torus, where `eta1, eta2` are iid
/// copies of the coefficient: exact enumeration on finite support,
/// quadrature with a reported error bound otherwise. Returns
/// `(value, abs_error)`.
pub fn xi_norm_sq(w: f64, law: &CoefficientLaw) -> (f64, f64) {
    if w == 0.0 {
        return (0.0, 0.0);
    }
    let torus_sq = |t: f64| {
        let d = (t - t.round()).abs();
        d * d
    };
    if let Some(support) = law.support() {
        let mut total = 0.0;
        for &(v1, p1) in &support {
            for &(v2, p2) in &support {
                total += p1 * p2 * torus_sq(w * (v1 - v2));
            }
        }
        return (total, 0.0);
    }
    // continuous laws: integrate against the density of eta1 - eta2
    use crate::laws::LawKind;
    let (density, half_support): (Box<dyn Fn(f64) -> f64>, f64) = match law.kind {
        LawKind::Gaussian => {
            // difference is N(0, 2)
            let sigma2 = 2.0;
            (
                Box::new(move |t: f64| {
                    (-(t * t) / (2.0 * sigma2)).exp() / (2.0 * std::f64::consts::PI * sigma2).sqrt()
                }),
                12.0,
            )
        }
        LawKind::UniformSym => {
            // difference of two uniforms on [-s, s] is triangular on [-2s, 2s]
            let s = 3f64.sqrt();
            (
                Box::new(move |t: f64| {
                    let a = 2.0 * s - t.abs();
                    if a > 0.0 {
                        a / (4.0 * s * s)
                    } else {
                        0.0
                    }
                }),
                2.0 * s,
            )
        }
        _ => unreachable!("finite-support laws are enumerated above"),
    };
    let f = |t: f64| torus_sq(w * t) * density(t);
    match quad::integrate(&f, -half_support, half_support, 1e-9) {
        Ok((v, e)) => (v, e + 0.25 * 2e-16), // truncated tail is below fp noise
        Err(e) => {
            // tolerance missed: still a usable value with an honest error bar
            let fallback = quad::integrate(&f, -half_support, half_support, e.achieved * 4.0)
                .map(|(v, err)| (v, err))
                .unwrap_or((f64::NAN, f64::INFINITY));
            fallback
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn charfn_bound_shape() {
        assert_eq!(charfn_bound(0.0, 5.0, 1.0), 1.0);
        // min saturates at the variance
        let v = 3.0;
        assert_eq!(charfn_bound(10.0, v, 0.7), (-0.7 * v).exp());
        assert_eq!(charfn_bound(100.0, v, 0.7), charfn_bound(10.0, v, 0.7));
    }

    #[test]
    fn gaussian_truth_sits_below_bound() {
        // |Phi(w)| = exp(-2 pi^2 w^2) for the exact Gaussian case
        let v: f64 = 9.0;
        let c1 = 2.0 * PI * PI;
        for w in [0.1, 0.5, 1.0, 2.0] {
            let truth = (-2.0 * PI * PI * w * w).exp();
            if w * w <= v {
                assert!(truth <= charfn_bound(w, v, c1) + 1e-15);
            }
        }
    }

    #[test]
    fn admissibility_window() {
        assert!(charfn_admissible(0.0, 0.9, 256, 0.5, 10.0));
        assert!(charfn_admissible(100.0, 0.9, 256, 0.5, 10.0));
        // tiny window when x = 1: cap is (1/c2) sqrt(n)
        assert!(!charfn_admissible(1e9, 1.0, 256, 0.5, 10.0));
    }

    #[test]
    fn small_ball_guard() {
        let b = small_ball_bound(0.2, 5.0, 0.05);
        assert!(b.asserted);
        assert_eq!(b.bound, 1.0);
        let below = small_ball_bound(0.01, 5.0, 0.05);
        assert!(!below.asserted);
    }

    #[test]
    fn window_floor_example() {
        // x = 1 - log n / n at n = 256, c = 0.1
        let n = 256usize;
        let x = 1.0 - (n as f64).ln() / n as f64;
        let v = crate::poly::variance_profile(n, x);
        let floor = small_ball_window_floor(v, n, 0.1);
        assert!((floor - v.powf(-0.5) * 256f64.powf(-0.1)).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_trivial_points() {
        assert_eq!(near_zero_tail_bound(0.0, 0.7), 1.0);
        assert!((near_zero_tail_bound(1.0, 2f64.ln()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pseudo_hyperbolic_values() {
        assert_eq!(pseudo_hyperbolic(0.3, 0.3), Some(0.0));
        assert_eq!(pseudo_hyperbolic(0.0, 0.5), Some(0.5));
        let d = pseudo_hyperbolic(0.9, 0.95).unwrap();
        assert!((d - 0.05 / (1.0 - 0.855)).abs() < 1e-12);
        assert_eq!(pseudo_hyperbolic(1.0, 1.0), None);
        // symmetry
        assert_eq!(pseudo_hyperbolic(0.2, 0.7), pseudo_hyperbolic(0.7, 0.2));
    }

    #[test]
    fn alpha_grid_endpoints_and_monotonicity() {
        let n = 1024;
        let (c, cp, l) = (8.0, 16.0, 8);
        let grid = alpha_grid(n, c, cp, l);
        let log_n = (n as f64).ln();
        assert!((grid[0] - (1.0 - c * log_n / n as f64)).abs() < 1e-14);
        assert!((grid[l] - (1.0 - log_n / (cp * n as f64))).abs() < 1e-14);
        for w in grid.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn alpha_grid_gaps_uniform_in_pseudo_hyperbolic_metric() {
        // gaps d(alpha_j, alpha_{j+1}) <= K/L with one K across n and j
        let (c, cp) = (8.0, 16.0);
        let mut max_scaled_gap = 0.0f64;
        for exp in [8u32, 10, 12, 14] {
            let n = 1usize << exp;
            for l in [4usize, 8, 16] {
                let grid = alpha_grid(n, c, cp, l);
                for w in grid.windows(2) {
                    let d = pseudo_hyperbolic(w[0], w[1]).unwrap();
                    max_scaled_gap = max_scaled_gap.max(d * l as f64);
                }
            }
        }
        assert!(
            max_scaled_gap < 10.0,
            "scaled pseudo-hyperbolic gap {max_scaled_gap} not uniform"
        );
    }

    #[test]
    fn maslova_constant() {
        assert!((maslova_variance_slope() - 0.4927).abs() < 1e-4);
        assert!(maslova_variance_slope() > 0.0);
    }

    #[test]
    fn jensen_bound_trivial_cases() {
        // constant polynomial above the cutoff: zero roots, bound >= 0
        let p = crate::poly::PolynomialSample::from_f64_coefficients(&[1.0, 0.0, 0.0]);
        let b = jensen_root_bound(&p, 0.25, 0.625, 0.5);
        assert!(b >= 0.0);
        // no coefficient reaches the cutoff: the degree bound comes back
        let small = crate::poly::PolynomialSample::from_f64_coefficients(&[0.1, 0.1, 0.1]);
        assert_eq!(jensen_root_bound(&small, 0.25, 0.625, 0.5), 2.0);
    }

    #[test]
    fn jensen_bound_geometric_example() {
        // all |xi_m| = 1, k = 0, R = 1/2: M_0 = sum R^m < 2
        let p = crate::poly::PolynomialSample::from_f64_coefficients(&[1.0; 40]);
        let (r, big_r, c0) = (0.25, 0.5, 0.5);
        let b = jensen_root_bound(&p, r, big_r, c0);
        let m0: f64 = (0..40).map(|m| 0.5f64.powi(m)).sum();
        let expect = (m0.ln() + 2f64.ln()) / (big_r / r).ln();
        assert!((b - expect).abs() < 1e-10, "{b} vs {expect}");
    }

    #[test]
    fn iterated_moment_small_cases() {
        // k = n: the single j = 0 term is n! y^n
        for (n, y) in [(3usize, 0.5f64), (5, 1.0), (8, 0.9)] {
            let want = (1..=n).map(|i| i as f64).product::<f64>() * y.powi(n as i32);
            let got = iterated_moment_exact(n, n, y);
            assert!((got - want).abs() < 1e-9 * want, "n={n} y={y}: {got} vs {want}");
        }
        // k = 1, n = 1, y = 1
        assert!((iterated_moment_exact(1, 1, 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(iterated_moment_exact(4, 2, 0.0), 0.0);
    }

    #[test]
    fn iterated_moment_never_overflows() {
        let v = iterated_moment_exact(100_000, 64, 1.0);
        assert!(v.is_finite() || v == f64::INFINITY);
        let small = iterated_moment_exact(100_000, 2, 0.5);
        assert!(small.is_finite());
    }

    #[test]
    fn bound_curve_sanity() {
        let (b1, b2, dual) = iterated_bound_curves(1, 1, 0.0, 1.0);
        assert!((b1 - 0.25).abs() < 1e-12); // y^k (n/2)^(k+1) = 1/4
        assert_eq!(b2, f64::INFINITY);
        assert!(dual.is_finite());
        let (_, _, dual_at_one) = iterated_bound_curves(5, 2, 1.0, 1.0);
        assert_eq!(dual_at_one, 0.0);
    }

    #[test]
    fn xi_norm_rademacher_values() {
        let law = crate::laws::CoefficientLaw::rademacher();
        let (v, e) = xi_norm_sq(0.5, &law);
        assert_eq!(e, 0.0);
        assert!(v.abs() < 1e-15, "differences land on the integers: {v}");
        let (v, _) = xi_norm_sq(0.25, &law);
        assert!((v - 0.125).abs() < 1e-15);
        assert_eq!(xi_norm_sq(0.0, &law), (0.0, 0.0));
    }

    #[test]
    fn xi_norm_gaussian_saturates() {
        let law = crate::laws::CoefficientLaw::gaussian();
        let (v, e) = xi_norm_sq(0.3, &law);
        assert!(v > 0.0 && v < 0.25);
        assert!(e < 1e-6);
        // large w: the wrapped difference is nearly uniform, second moment 1/12
        let (v, _) = xi_norm_sq(6.0, &law);
        assert!((v - 1.0 / 12.0).abs() < 0.01, "{v}");
    }
}
