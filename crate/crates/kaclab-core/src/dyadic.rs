use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact dyadic rational `mantissa * 2^exponent`.
///
/// Every finite `f64` is one of these, so a sampled coefficient round-trips
/// exactly between its floating value and its dyadic form. That makes a
/// realized polynomial an exact object and its root count a well-defined
/// integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicCoefficient {
    pub mantissa: i64,
    pub exponent: i32,
}

impl DyadicCoefficient {
    pub const ZERO: DyadicCoefficient = DyadicCoefficient { mantissa: 0, exponent: 0 };

    /// Exact decomposition of a finite `f64`. Panics on NaN or infinity,
    /// which cannot occur for sampled coefficients.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "coefficient must be finite, got {v}");
        if v == 0.0 {
            return Self::ZERO;
        }
        let bits = v.to_bits();
        let sign: i64 = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
        let (mut mantissa, mut exponent) = if biased == 0 {
            // subnormal
            (frac, -1074)
        } else {
            (frac | (1 << 52), biased - 1075)
        };
        while mantissa & 1 == 0 {
            mantissa >>= 1;
            exponent += 1;
        }
        DyadicCoefficient { mantissa: sign * mantissa, exponent }
    }

    /// Exact reconstruction of the floating value.
    pub fn to_f64(self) -> f64 {
        // Mantissa has at most 53 bits, so the conversion is exact; the
        // scaling by a power of two is exact as well (no overflow: sampled
        // values were finite f64s).
        (self.mantissa as f64) * 2f64.powi(self.exponent)
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0
    }

    pub fn to_rational(self) -> BigRational {
        let m = BigInt::from(self.mantissa);
        if self.exponent >= 0 {
            BigRational::from(m << self.exponent as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exponent) as usize)
        }
    }
}

/// Rewrite a dyadic coefficient array as integers sharing one power of two:
/// `c_j = int_j * 2^shift`. Zero coefficients stay zero.
pub fn to_scaled_integers(coeffs: &[DyadicCoefficient]) -> (Vec<BigInt>, i64) {
    let min_exp = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.exponent)
        .min()
        .unwrap_or(0);
    let ints = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                BigInt::zero()
            } else {
                BigInt::from(c.mantissa) << (c.exponent - min_exp) as usize
            }
        })
        .collect();
    (ints, min_exp as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_exact() {
        for v in [
            0.0,
            1.0,
            -1.0,
            0.5,
            -0.75,
            std::f64::consts::SQRT_2,
            1.2345e-7,
            -9.87e120,
            f64::MIN_POSITIVE,
            f64::MIN_POSITIVE / 4.0, // subnormal
            341.0 / 256.0,
        ] {
            let d = DyadicCoefficient::from_f64(v);
            assert_eq!(d.to_f64(), v, "roundtrip failed for {v}");
            assert_eq!(d.is_zero(), v == 0.0);
        }
    }

    #[test]
    fn mantissa_zero_iff_value_zero() {
        assert!(DyadicCoefficient::from_f64(0.0).is_zero());
        assert!(!DyadicCoefficient::from_f64(1e-300).is_zero());
    }

    #[test]
    fn rational_agrees_with_float() {
        let d = DyadicCoefficient::from_f64(-0.375);
        let r = d.to_rational();
        assert_eq!(r, BigRational::new(BigInt::from(-3), BigInt::from(8)));
    }

    #[test]
    fn scaled_integers_reconstruct() {
        let coeffs: Vec<_> = [1.5, 0.0, -0.25, 8.0]
            .iter()
            .map(|&v| DyadicCoefficient::from_f64(v))
            .collect();
        let (ints, shift) = to_scaled_integers(&coeffs);
        for (c, i) in coeffs.iter().zip(&ints) {
            let back = BigRational::from(i.clone())
                * DyadicCoefficient { mantissa: 1, exponent: shift as i32 }.to_rational();
            assert_eq!(back, c.to_rational());
        }
    }
}
