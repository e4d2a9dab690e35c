use crate::dyadic::DyadicCoefficient;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// One end of a root-count interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Endpoint {
    NegInf,
    Finite { value: BigRational, closed: bool },
    PosInf,
}

/// A rational-endpoint interval with open/closed flags, possibly unbounded.
/// The universe of every root-count query.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

/// A bounded interval with both endpoints materialized, the form the
/// counting backends work on.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

pub fn rational_from_f64(v: f64) -> BigRational {
    DyadicCoefficient::from_f64(v).to_rational()
}

pub fn rational_from_int(v: i64) -> BigRational {
    BigRational::from(BigInt::from(v))
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Self {
        if let (Endpoint::Finite { value: a, closed: ac }, Endpoint::Finite { value: b, closed: bc }) =
            (&lo, &hi)
        {
            assert!(a <= b, "interval endpoints out of order");
            if a == b {
                assert!(*ac && *bc, "degenerate interval must be closed on both ends");
            }
        }
        Interval { lo, hi }
    }

    pub fn closed(a: BigRational, b: BigRational) -> Self {
        Self::new(
            Endpoint::Finite { value: a, closed: true },
            Endpoint::Finite { value: b, closed: true },
        )
    }

    pub fn open(a: BigRational, b: BigRational) -> Self {
        Self::new(
            Endpoint::Finite { value: a, closed: false },
            Endpoint::Finite { value: b, closed: false },
        )
    }

    pub fn open_closed(a: BigRational, b: BigRational) -> Self {
        Self::new(
            Endpoint::Finite { value: a, closed: false },
            Endpoint::Finite { value: b, closed: true },
        )
    }

    pub fn closed_open(a: BigRational, b: BigRational) -> Self {
        Self::new(
            Endpoint::Finite { value: a, closed: true },
            Endpoint::Finite { value: b, closed: false },
        )
    }

    pub fn point(a: BigRational) -> Self {
        Self::closed(a.clone(), a)
    }

    pub fn closed_f64(a: f64, b: f64) -> Self {
        Self::closed(rational_from_f64(a), rational_from_f64(b))
    }

    pub fn open_f64(a: f64, b: f64) -> Self {
        Self::open(rational_from_f64(a), rational_from_f64(b))
    }

    pub fn real_line() -> Self {
        Interval { lo: Endpoint::NegInf, hi: Endpoint::PosInf }
    }

    /// `[a, +inf)` when closed, `(a, +inf)` otherwise.
    pub fn ray_up(a: BigRational, closed: bool) -> Self {
        Interval { lo: Endpoint::Finite { value: a, closed }, hi: Endpoint::PosInf }
    }

    /// `(-inf, b]` when closed, `(-inf, b)` otherwise.
    pub fn ray_down(b: BigRational, closed: bool) -> Self {
        Interval { lo: Endpoint::NegInf, hi: Endpoint::Finite { value: b, closed } }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(
            (&self.lo, &self.hi),
            (Endpoint::Finite { .. }, Endpoint::Finite { .. })
        )
    }

    pub fn as_finite(&self) -> Option<FiniteInterval> {
        match (&self.lo, &self.hi) {
            (
                Endpoint::Finite { value: a, closed: ac },
                Endpoint::Finite { value: b, closed: bc },
            ) => Some(FiniteInterval {
                lo: a.clone(),
                hi: b.clone(),
                lo_closed: *ac,
                hi_closed: *bc,
            }),
            _ => None,
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let lo_ok = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::Finite { value, closed } => x > value || (*closed && x == value),
        };
        let hi_ok = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
            Endpoint::Finite { value, closed } => x < value || (*closed && x == value),
        };
        lo_ok && hi_ok
    }
}

impl FiniteInterval {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (x > &self.lo || (self.lo_closed && x == &self.lo))
            && (x < &self.hi || (self.hi_closed && x == &self.hi))
    }

    pub fn contains_zero_interior(&self) -> bool {
        let zero = BigRational::zero();
        self.lo.is_negative() && self.hi.is_positive() && zero > self.lo && zero < self.hi
    }
}

/// Reciprocals of an interval lying strictly on one side of the unit
/// circle: maps `(a, b)` with `1 <= a` (or `b <= -1`) to `(1/b, 1/a)`,
/// carrying the flags across and turning an infinite endpoint into an open
/// endpoint at zero.
pub fn reciprocal_of(fi: &FiniteInterval) -> FiniteInterval {
    FiniteInterval {
        lo: BigRational::one() / fi.hi.clone(),
        hi: BigRational::one() / fi.lo.clone(),
        lo_closed: fi.hi_closed,
        hi_closed: fi.lo_closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_respects_flags() {
        let half_open = Interval::closed_open(rational_from_int(0), rational_from_int(1));
        assert!(half_open.contains(&rational_from_int(0)));
        assert!(!half_open.contains(&rational_from_int(1)));
        assert!(half_open.contains(&BigRational::new(BigInt::from(1), BigInt::from(2))));
    }

    #[test]
    fn rays_and_line() {
        let line = Interval::real_line();
        assert!(line.contains(&rational_from_int(-1_000_000)));
        assert!(!line.is_bounded());
        let ray = Interval::ray_up(rational_from_int(1), true);
        assert!(ray.contains(&rational_from_int(1)));
        assert!(!ray.contains(&rational_from_int(0)));
    }

    #[test]
    #[should_panic(expected = "degenerate")]
    fn degenerate_open_interval_rejected() {
        Interval::open(rational_from_int(1), rational_from_int(1));
    }

    #[test]
    fn reciprocal_flips_flags() {
        let fi = FiniteInterval {
            lo: rational_from_int(1),
            hi: rational_from_int(4),
            lo_closed: true,
            hi_closed: false,
        };
        let r = reciprocal_of(&fi);
        assert_eq!(r.lo, BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(r.hi, rational_from_int(1));
        assert!(!r.lo_closed);
        assert!(r.hi_closed);
    }
}
