use crate::ball::{horner, horner_derivative, CertifiedValue};
use crate::dyadic::DyadicCoefficient;
use crate::error::ConfigError;
use crate::laws::CoefficientLaw;
use crate::rng::seeded_stream;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// One realized Kac polynomial `p(x) = c_0 + c_1 x + ... + c_n x^n` with
/// exact dyadic-rational coefficients and full seed provenance.
///
/// Prefixes of the coefficient array are themselves valid samples: the
/// degree-m truncation is the m-th partial sum of the same random series.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSample {
    coeffs: Vec<DyadicCoefficient>,
    coeffs_f64: Vec<f64>,
    pub law_id: String,
    pub seed: (u64, u64),
}

impl PolynomialSample {
    /// Draw a degree-`n` sample from `law` on the stream for
    /// `(master_seed, trial_index)`.
    pub fn sample(law: &CoefficientLaw, n: usize, master_seed: u64, trial_index: u64) -> Self {
        let mut stream = seeded_stream(master_seed, trial_index);
        let coeffs: Vec<_> = (0..=n).map(|_| law.sample(&mut stream)).collect();
        Self::assemble(coeffs, law.spec_string().to_string(), (master_seed, trial_index))
    }

    /// Wrap explicit coefficients (constant term first).
    pub fn from_coefficients(coeffs: Vec<DyadicCoefficient>) -> Self {
        assert!(!coeffs.is_empty(), "need at least the constant term");
        Self::assemble(coeffs, "explicit".to_string(), (0, 0))
    }

    /// Convenience wrapper for tests and small tools.
    pub fn from_f64_coefficients(values: &[f64]) -> Self {
        Self::from_coefficients(values.iter().map(|&v| DyadicCoefficient::from_f64(v)).collect())
    }

    fn assemble(coeffs: Vec<DyadicCoefficient>, law_id: String, seed: (u64, u64)) -> Self {
        let coeffs_f64 = coeffs.iter().map(|c| c.to_f64()).collect();
        PolynomialSample { coeffs, coeffs_f64, law_id, seed }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[DyadicCoefficient] {
        &self.coeffs
    }

    pub fn coefficients_f64(&self) -> &[f64] {
        &self.coeffs_f64
    }

    /// Degree after dropping zero leading coefficients; `None` for the zero
    /// polynomial.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.effective_degree().is_none()
    }

    /// Number of vanishing low-order coefficients, i.e. the multiplicity of
    /// the root at the origin (degree + 1 for the zero polynomial).
    pub fn vanishing_prefix(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len())
    }

    /// The partial sum of degree `m <= n`, sharing law and seed provenance.
    pub fn prefix(&self, m: usize) -> PolynomialSample {
        assert!(m <= self.degree());
        Self::assemble(self.coeffs[..=m].to_vec(), self.law_id.clone(), self.seed)
    }

    /// Coefficient reversal: `x^n p(1/x)`. Roots in `[1, inf)` of the
    /// original correspond to roots in `(0, 1]` of the transform. An
    /// involution; degree field is unchanged.
    pub fn reciprocal_transform(&self) -> PolynomialSample {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::assemble(coeffs, self.law_id.clone(), self.seed)
    }

    /// Certified floating evaluation of the k-th derivative at `x`.
    pub fn eval(&self, x: f64, k: usize) -> CertifiedValue {
        horner_derivative(&self.coeffs_f64, CertifiedValue::exact(x), k)
    }

    /// Certified floating range of p over the closed interval `[lo, hi]`.
    pub fn eval_interval(&self, lo: f64, hi: f64) -> CertifiedValue {
        horner(&self.coeffs_f64, CertifiedValue::from_interval(lo, hi))
    }

    /// Exact rational evaluation of the k-th derivative, the fallback route
    /// behind every certified sign.
    pub fn eval_exact(&self, x: &BigRational, k: usize) -> BigRational {
        let n = self.degree();
        if k > n {
            return BigRational::zero();
        }
        let mut b: Vec<BigRational> = self.coeffs.iter().map(|c| c.to_rational()).collect();
        for pass in 0..=k {
            for j in (pass..n).rev() {
                let up = b[j + 1].clone() * x;
                b[j] += up;
            }
        }
        let mut factorial = BigInt::one();
        for i in 2..=k {
            factorial *= BigInt::from(i);
        }
        b[k].clone() * BigRational::from(factorial)
    }

    /// Exact sign of `p(x)` (-1, 0, +1).
    pub fn sign_exact(&self, x: &BigRational) -> i8 {
        let v = self.eval_exact(x, 0);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Debug/replay dump: one header line `n law master_seed trial_index`,
    /// then n+1 lines `mantissa exponent`.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.degree(),
            self.law_id,
            self.seed.0,
            self.seed.1
        );
        for c in &self.coeffs {
            out.push_str(&format!("{} {}\n", c.mantissa, c.exponent));
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self, ConfigError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| ConfigError::Malformed {
            line: 1,
            text: "empty dump".to_string(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(ConfigError::Malformed { line: 1, text: header.to_string() });
        }
        let bad = |line: usize, text: &str| ConfigError::Malformed { line, text: text.to_string() };
        let n: usize = parts[0].parse().map_err(|_| bad(1, header))?;
        let law_id = parts[1].to_string();
        let seed0: u64 = parts[2].parse().map_err(|_| bad(1, header))?;
        let seed1: u64 = parts[3].parse().map_err(|_| bad(1, header))?;
        let mut coeffs = Vec::with_capacity(n + 1);
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(bad(i + 2, line));
            }
            let mantissa: i64 = fields[0].parse().map_err(|_| bad(i + 2, line))?;
            let exponent: i32 = fields[1].parse().map_err(|_| bad(i + 2, line))?;
            coeffs.push(DyadicCoefficient { mantissa, exponent });
        }
        if coeffs.len() != n + 1 {
            return Err(bad(1, "coefficient count does not match header"));
        }
        Ok(Self::assemble(coeffs, law_id, (seed0, seed1)))
    }
}

/// `V_n(x) = sum_{j=0}^n x^(2j)`, the variance of `p_n(x)` under unit
/// variance coefficients. Closed form away from `|x| = 1`, direct
/// summation near it where the closed form cancels.
pub fn variance_profile(n: usize, x: f64) -> f64 {
    let y = x * x;
    if (1.0 - y).abs() < 1e-8 {
        let mut sum = 0.0;
        let mut pow = 1.0;
        for _ in 0..=n {
            sum += pow;
            pow *= y;
        }
        sum
    } else {
        (1.0 - y.powi(n as i32 + 1)) / (1.0 - y)
    }
}

/// `V_n(x)` together with the comparator `(1 - x + 1/n)^-1` and their
/// ratio, for monitoring the comparability on `[0, 1]`.
pub fn variance_comparability(n: usize, x: f64) -> (f64, f64, f64) {
    assert!(n >= 1);
    assert!((0.0..=1.0).contains(&x));
    let v = variance_profile(n, x);
    let comparator = 1.0 / (1.0 - x + 1.0 / n as f64);
    (v, comparator, v / comparator)
}

/// Worst-case tail `|p_m(x) - p_n(x)|` when every coefficient is bounded by
/// `cap`: `cap * sum_{j=n+1}^{m} |x|^j`.
pub fn tail_difference_bound(n: usize, m: usize, x: f64, cap: f64) -> f64 {
    assert!(n <= m);
    assert!(x.abs() <= 1.0);
    assert!(cap > 0.0);
    if m == n {
        return 0.0;
    }
    let a = x.abs();
    if a == 1.0 {
        cap * (m - n) as f64
    } else {
        cap * a.powi(n as i32 + 1) * (1.0 - a.powi((m - n) as i32)) / (1.0 - a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn all_ones_at_one() {
        let p = PolynomialSample::from_f64_coefficients(&[1.0; 9]);
        let v = p.eval(1.0, 0);
        assert_eq!(v.value, 9.0);
        let exact = p.eval_exact(&BigRational::from(BigInt::from(1)), 0);
        assert_eq!(exact, BigRational::from(BigInt::from(9)));
    }

    #[test]
    fn top_derivative_is_factorial_times_lead() {
        let p = PolynomialSample::from_f64_coefficients(&[0.5, -1.0, 2.0, 3.0]);
        // p''' = 3! * 3 = 18 everywhere
        let exact = p.eval_exact(&BigRational::new(BigInt::from(1), BigInt::from(3)), 3);
        assert_eq!(exact, BigRational::from(BigInt::from(18)));
        let v = p.eval(0.2, 3);
        assert!((v.value - 18.0).abs() <= v.radius + 1e-9);
    }

    #[test]
    fn certified_matches_exact_on_random_sample() {
        let law = CoefficientLaw::gaussian();
        let p = PolynomialSample::sample(&law, 30, 11, 0);
        let x = 0.73;
        let xr = BigRational::new(BigInt::from(73), BigInt::from(100));
        for k in [0usize, 1, 2] {
            let ball = p.eval(x, k);
            let exact = p.eval_exact(&xr, k).to_f64().unwrap();
            assert!(
                (ball.value - exact).abs() <= ball.radius + 1e-9 * exact.abs().max(1.0),
                "k={k}: ball {} +- {} vs exact {exact}",
                ball.value,
                ball.radius
            );
        }
    }

    #[test]
    fn prefix_consistency() {
        let law = CoefficientLaw::rademacher();
        let p = PolynomialSample::sample(&law, 40, 5, 2);
        let x = BigRational::new(BigInt::from(3), BigInt::from(7));
        for m in [0usize, 7, 20, 40] {
            let q = p.prefix(m);
            assert_eq!(q.degree(), m);
            let direct: BigRational = (0..=m)
                .map(|j| p.coefficients()[j].to_rational() * x.clone().pow(j as i32))
                .sum();
            assert_eq!(q.eval_exact(&x, 0), direct);
        }
    }

    #[test]
    fn reciprocal_is_involution_and_reverses() {
        let p = PolynomialSample::from_f64_coefficients(&[-2.0, 1.0]);
        let q = p.reciprocal_transform();
        assert_eq!(q.coefficients_f64(), &[1.0, -2.0]);
        assert_eq!(q.reciprocal_transform(), p);
        // palindromic coefficients are a fixed point
        let pal = PolynomialSample::from_f64_coefficients(&[1.0, 5.0, 1.0]);
        assert_eq!(pal.reciprocal_transform(), pal);
    }

    #[test]
    fn variance_profile_known_values() {
        assert_eq!(variance_profile(7, 1.0), 8.0);
        assert_eq!(variance_profile(7, 0.0), 1.0);
        assert!((variance_profile(4, 0.5) - 341.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn variance_profile_matches_direct_sum() {
        for &n in &[4usize, 64, 1024, 1 << 17] {
            for &x in &[-1.0, -0.999999, -0.6, 0.0, 0.3, 0.99, 0.99999999, 1.0] {
                let v = variance_profile(n, x);
                let direct: f64 = {
                    let mut s = 0.0;
                    let mut pow = 1.0;
                    let y = x * x;
                    for _ in 0..=n {
                        s += pow;
                        pow *= y;
                    }
                    s
                };
                assert!(
                    (v - direct).abs() <= 1e-12 * direct.abs(),
                    "n={n} x={x}: {v} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn comparability_examples() {
        let (_, _, ratio) = variance_comparability(10, 0.0);
        assert!((ratio - 11.0 / 10.0).abs() < 1e-12);
        // at x = 1 the ratio is (n+1)/n
        let (v, c, ratio) = variance_comparability(9, 1.0);
        assert_eq!(v, 10.0);
        assert!((c - 9.0).abs() < 1e-12);
        assert!((ratio - 10.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn comparability_stays_within_factor_four() {
        for &n in &[16usize, 64, 256, 1024, 4096] {
            for i in 0..=40 {
                let x = i as f64 / 40.0;
                let (_, _, ratio) = variance_comparability(n, x);
                assert!(
                    (0.25..=4.0).contains(&ratio),
                    "n={n} x={x}: ratio {ratio} outside [1/4, 4]"
                );
            }
        }
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(tail_difference_bound(3, 9, 0.0, 2.0), 0.0);
        assert_eq!(tail_difference_bound(3, 8, 1.0, 1.0), 5.0);
    }

    #[test]
    fn tail_bound_dominates_actual_difference() {
        let law = CoefficientLaw::rademacher();
        for trial in 0..1000 {
            let p = PolynomialSample::sample(&law, 24, 99, trial);
            let q = p.prefix(16);
            let x = (trial as f64 / 1000.0) * 2.0 - 1.0; // in [-1, 1)
            let diff = (p.eval(x, 0).value - q.eval(x, 0).value).abs();
            let bound = tail_difference_bound(16, 24, x, 1.0);
            assert!(diff <= bound + 1e-9, "x={x}: |diff| {diff} > bound {bound}");
        }
    }

    #[test]
    fn dump_roundtrip() {
        let law = CoefficientLaw::three_point(0.5).unwrap();
        let p = PolynomialSample::sample(&law, 12, 42, 7);
        let text = p.dump();
        let back = PolynomialSample::parse_dump(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn vanishing_prefix_counts_low_zeros() {
        let p = PolynomialSample::from_f64_coefficients(&[0.0, 0.0, 3.0, 1.0]);
        assert_eq!(p.vanishing_prefix(), 2);
        assert!(!p.is_zero());
        let z = PolynomialSample::from_f64_coefficients(&[0.0, 0.0]);
        assert!(z.is_zero());
        assert_eq!(z.vanishing_prefix(), 2);
    }
}
