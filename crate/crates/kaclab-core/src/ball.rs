/// A floating value with a guaranteed error radius: the true quantity lies
/// in `[value - radius, value + radius]`.
///
/// Arithmetic inflates the radius outward past every rounding step, so a
/// sign decided by a ball (`|value| > radius`) is a certified sign. Used
/// both for point evaluations and, with a nonzero input radius, as interval
/// arithmetic over a whole box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub radius: f64,
}

// One unit roundoff is 2^-53; we charge 2^-52 per operation plus an
// additive guard that dominates rounding in the subnormal range.
const REL: f64 = 2.220446049250313e-16;
const GUARD: f64 = 1e-300;

#[inline]
fn round_slop(v: f64) -> f64 {
    v.abs() * REL + GUARD
}

/// Outward-rounds a radius computed in floating point.
#[inline]
fn rad_up(r: f64) -> f64 {
    r * (1.0 + 4.0 * REL) + GUARD
}

impl CertifiedValue {
    pub const ZERO: CertifiedValue = CertifiedValue { value: 0.0, radius: 0.0 };

    pub fn exact(value: f64) -> Self {
        CertifiedValue { value, radius: 0.0 }
    }

    /// Ball covering the interval `[lo, hi]`.
    pub fn from_interval(lo: f64, hi: f64) -> Self {
        let mid = 0.5 * (lo + hi);
        let rad = rad_up((hi - mid).abs().max((mid - lo).abs()));
        CertifiedValue { value: mid, radius: rad }
    }

    pub fn add(self, other: Self) -> Self {
        let value = self.value + other.value;
        let radius = rad_up(self.radius + other.radius + round_slop(value));
        CertifiedValue { value, radius }
    }

    pub fn mul(self, other: Self) -> Self {
        let value = self.value * other.value;
        let radius = rad_up(
            self.value.abs() * other.radius
                + other.value.abs() * self.radius
                + self.radius * other.radius
                + round_slop(value),
        );
        CertifiedValue { value, radius }
    }

    pub fn scale(self, c: f64) -> Self {
        self.mul(CertifiedValue::exact(c))
    }

    /// `Some(sign)` iff the sign is certified; `sign` is -1 or +1.
    pub fn sign(self) -> Option<i8> {
        if !self.value.is_finite() || !self.radius.is_finite() {
            None
        } else if self.value > self.radius {
            Some(1)
        } else if self.value < -self.radius {
            Some(-1)
        } else {
            None
        }
    }

    pub fn decided(self) -> bool {
        self.sign().is_some()
    }

    pub fn contains_zero(self) -> bool {
        !self.decided()
    }

    /// Upper bound on the absolute value.
    pub fn abs_upper(self) -> f64 {
        rad_up(self.value.abs() + self.radius)
    }
}

/// Horner evaluation of the polynomial with the given (exact-f64)
/// coefficients at the ball `x`, tracking every rounding step.
pub fn horner(coeffs: &[f64], x: CertifiedValue) -> CertifiedValue {
    let mut acc = CertifiedValue::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc.mul(x).add(CertifiedValue::exact(c));
    }
    acc
}

/// Ball evaluation of the k-th derivative via repeated synthetic division:
/// each pass peels one Taylor coefficient at `x`, avoiding the
/// factorial-weighted coefficient blowup of the direct formula. The final
/// multiplication by `k!` may overflow to infinity for very large `k`, in
/// which case the returned radius is infinite and the caller must fall back
/// to exact arithmetic.
pub fn horner_derivative(coeffs: &[f64], x: CertifiedValue, k: usize) -> CertifiedValue {
    let n = coeffs.len() - 1;
    if k > n {
        return CertifiedValue::ZERO;
    }
    if k == 0 {
        return horner(coeffs, x);
    }
    let mut b: Vec<CertifiedValue> = coeffs.iter().map(|&c| CertifiedValue::exact(c)).collect();
    for pass in 0..=k {
        for j in (pass..n).rev() {
            b[j] = b[j].add(b[j + 1].mul(x));
        }
    }
    let mut factorial = 1.0f64;
    for i in 2..=k {
        factorial *= i as f64;
    }
    let taylor = b[k];
    let value = taylor.value * factorial;
    let radius = rad_up(taylor.radius * factorial + round_slop(value));
    CertifiedValue { value, radius }
}
