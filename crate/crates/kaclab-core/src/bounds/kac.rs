//! Expected real-root density and counts for Gaussian coefficients.

use crate::bounds::quad::integrate;
use crate::error::QuadratureError;
use crate::interval::{Endpoint, Interval};
use std::f64::consts::PI;

/// Local density of the expected number of real roots at `x`, for standard
/// Gaussian coefficients and degree `n`.
///
/// Away from the unit circle this is the closed form
/// `(1/pi) sqrt(1/(1-x^2)^2 - ((n+1) x^n / (1 - x^(2n+2)))^2)`; near
/// `|x| = 1`, where that expression cancels catastrophically, the three
/// power sums behind it are accumulated directly. The density is even and
/// invariant under `x -> 1/x` up to the Jacobian `1/x^2`.
pub fn kac_density(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 0.0; // nonzero constants have no roots
    }
    let ax = x.abs();
    if ax > 1.0 {
        return kac_density(n, 1.0 / ax) / (x * x);
    }
    if 1.0 - ax * ax < 1e-3 {
        // direct power sums s_i = sum j^i y^j with y = x^2
        let y = ax * ax;
        let (mut s0, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64);
        let mut pow = 1.0f64;
        for j in 0..=n {
            let jf = j as f64;
            s0 += pow;
            s1 += jf * pow;
            s2 += jf * jf * pow;
            pow *= y;
        }
        let det = (s0 * s2 - s1 * s1).max(0.0);
        return det.sqrt() / (PI * ax * s0);
    }
    let a = 1.0 / (1.0 - ax * ax);
    let top = (n as f64 + 1.0) * ax.powi(n as i32) / (1.0 - ax.powi(2 * n as i32 + 2));
    let det = (a * a - top * top).max(0.0);
    det.sqrt() / PI
}

/// `F(c) = integral of the density over [0, c]`, `0 <= c <= 1`. The
/// integrable near-edge growth is handled with the substitution
/// `x = 1 - exp(-u)`.
fn density_integral_to(n: usize, c: f64, tol: f64) -> Result<f64, QuadratureError> {
    assert!((0.0..=1.0).contains(&c));
    if c == 0.0 || n == 0 {
        return Ok(0.0);
    }
    let split = 0.9_f64.min(c);
    let (mut total, mut spent) = integrate(&|x| kac_density(n, x), 0.0, split, 0.25 * tol)?;
    if c > split {
        // inner part up to 1 - 1/n' in the exponential variable
        let np = n.max(10) as f64;
        let x_knee = (1.0 - 1.0 / np).max(split);
        let knee = x_knee.min(c);
        if knee > split {
            let u0 = -(1.0 - split).ln();
            let u1 = -(1.0 - knee).ln();
            let (v, e) = integrate(
                &|u: f64| {
                    let w = (-u).exp();
                    kac_density(n, 1.0 - w) * w
                },
                u0,
                u1,
                0.25 * tol,
            )?;
            total += v;
            spent += e;
        }
        if c > knee {
            let (v, e) = integrate(&|x| kac_density(n, x), knee, c, 0.25 * tol)?;
            total += v;
            spent += e;
        }
    }
    let _ = spent;
    Ok(total)
}

/// Expected number of real roots of the degree-`n` Gaussian sample in the
/// interval, by adaptive quadrature of the density to absolute tolerance
/// `1e-6`. Unbounded parts fold into `[-1, 1]` through the `x -> 1/x`
/// symmetry, under which the density integral is invariant.
pub fn expected_count(n: usize, interval: &Interval) -> Result<f64, QuadratureError> {
    const TOL: f64 = 1e-6;
    // Reduce to signed-unit-box integrals: the target is a sum of at most
    // two integrals over subsets of [-1, 1].
    let lo = endpoint_value(&interval.lo, -f64::INFINITY);
    let hi = endpoint_value(&interval.hi, f64::INFINITY);
    if !(lo <= hi) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    // inside piece
    let a = lo.max(-1.0);
    let b = hi.min(1.0);
    if a < b {
        total += signed_unit_integral(n, a, b, TOL / 2.0)?;
    }
    // outside pieces, mirrored inward
    if hi > 1.0 {
        let (ma, mb) = (1.0 / hi.max(1.0), 1.0 / lo.max(1.0));
        if ma < mb {
            total += signed_unit_integral(n, ma, mb, TOL / 4.0)?;
        }
    }
    if lo < -1.0 {
        let (ma, mb) = (1.0 / hi.min(-1.0), 1.0 / lo.min(-1.0));
        if ma < mb {
            total += signed_unit_integral(n, ma, mb, TOL / 4.0)?;
        }
    }
    Ok(total)
}

fn endpoint_value(e: &Endpoint, unbounded: f64) -> f64 {
    match e {
        Endpoint::NegInf | Endpoint::PosInf => unbounded,
        Endpoint::Finite { value, closed: _ } => {
            use num_traits::ToPrimitive;
            value.to_f64().unwrap_or(unbounded)
        }
    }
}

/// Integral of the density over `[a, b]` with `-1 <= a < b <= 1`, reduced
/// to `[0, 1]` pieces by evenness.
fn signed_unit_integral(n: usize, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    if a >= 0.0 {
        return Ok(density_integral_to(n, b, tol / 2.0)? - density_integral_to(n, a, tol / 2.0)?);
    }
    if b <= 0.0 {
        return signed_unit_integral(n, -b, -a, tol);
    }
    Ok(density_integral_to(n, -a, tol / 2.0)? + density_integral_to(n, b, tol / 2.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rational_from_int;

    #[test]
    fn density_at_origin_is_one_over_pi() {
        for n in [1usize, 2, 7, 100] {
            assert!((kac_density(n, 0.0) - 1.0 / PI).abs() < 1e-14, "n={n}");
        }
        assert_eq!(kac_density(0, 0.0), 0.0);
    }

    #[test]
    fn density_is_even_and_reciprocal_symmetric() {
        for n in [3usize, 17, 256] {
            for x in [0.1, 0.5, 0.93, 0.999, 1.3, 7.0] {
                let rho = kac_density(n, x);
                assert!((rho - kac_density(n, -x)).abs() <= 1e-12 * rho.abs().max(1e-12));
                let mirrored = kac_density(n, 1.0 / x) / (x * x);
                assert!(
                    (rho - mirrored).abs() <= 1e-9 * rho.abs().max(1e-9),
                    "n={n} x={x}: {rho} vs {mirrored}"
                );
            }
        }
    }

    #[test]
    fn branch_crossover_is_continuous() {
        // the direct-sum and closed-form branches must agree near the switch
        for n in [8usize, 64, 1024] {
            for x in [0.99945, 0.99949, 0.99951, 0.99955] {
                let rho = kac_density(n, x);
                // compare against the direct-sum value computed explicitly
                let y = x * x;
                let (mut s0, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64);
                let mut pow = 1.0f64;
                for j in 0..=n {
                    let jf = j as f64;
                    s0 += pow;
                    s1 += jf * pow;
                    s2 += jf * jf * pow;
                    pow *= y;
                }
                let direct = (s0 * s2 - s1 * s1).max(0.0).sqrt() / (PI * x * s0);
                assert!(
                    (rho - direct).abs() <= 1e-7 * direct.max(1e-9),
                    "n={n} x={x}: {rho} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn degree_one_is_standard_cauchy() {
        // the single root -xi0/xi1 is standard Cauchy distributed
        for x in [0.0, 0.3, 0.9, 2.0] {
            let truth = 1.0 / (PI * (1.0 + x * x));
            assert!((kac_density(1, x) - truth).abs() < 1e-12, "x={x}");
        }
        let total = expected_count(1, &Interval::real_line()).unwrap();
        assert!((total - 1.0).abs() < 1e-6, "total {total}");
        let inside =
            expected_count(1, &Interval::closed(rational_from_int(-1), rational_from_int(1)))
                .unwrap();
        assert!((inside - 0.5).abs() < 1e-6, "inside {inside}");
    }

    #[test]
    fn symmetry_of_expected_counts() {
        for n in [4usize, 64, 1024] {
            let sym =
                expected_count(n, &Interval::closed(rational_from_int(-1), rational_from_int(1)))
                    .unwrap();
            let half =
                expected_count(n, &Interval::closed(rational_from_int(0), rational_from_int(1)))
                    .unwrap();
            assert!((sym - 2.0 * half).abs() < 5e-6, "n={n}: {sym} vs {}", 2.0 * half);
            let line = expected_count(n, &Interval::real_line()).unwrap();
            assert!((line - 2.0 * sym).abs() < 1e-5, "n={n}: {line} vs {}", 2.0 * sym);
        }
    }

    #[test]
    fn outside_equals_inside() {
        // integral over [1, inf) equals integral over (0, 1]
        let n = 64;
        let inside =
            expected_count(n, &Interval::closed(rational_from_int(0), rational_from_int(1)))
                .unwrap();
        let outside = expected_count(n, &Interval::ray_up(rational_from_int(1), true)).unwrap();
        assert!((inside - outside).abs() < 5e-6, "{inside} vs {outside}");
    }

    #[test]
    fn logarithmic_growth_rate() {
        let a = expected_count(1024, &Interval::closed(rational_from_int(0), rational_from_int(1)))
            .unwrap();
        let b = expected_count(4096, &Interval::closed(rational_from_int(0), rational_from_int(1)))
            .unwrap();
        let slope = (b - a) / 4f64.ln();
        let target = 1.0 / (2.0 * PI);
        assert!(
            (slope - target).abs() < 0.1 * target,
            "slope {slope} vs {target}"
        );
    }
}
