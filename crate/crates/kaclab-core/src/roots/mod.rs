//! Root counting over arbitrary rational intervals.
//!
//! Two backends sit behind one dispatcher: an exact Sturm oracle and a
//! certified Descartes subdivision counter. Unbounded intervals are
//! decomposed around the unit circle and the far pieces are counted on the
//! reciprocal polynomial, since `x^n p(1/x)` maps roots in `[1, inf)` onto
//! roots in `(0, 1]`.

pub mod descartes;
pub mod sturm;

pub use descartes::DescartesBudget;

use crate::error::RootCountError;
use crate::interval::{reciprocal_of, Endpoint, FiniteInterval, Interval};
use crate::poly::PolynomialSample;
use num_rational::BigRational;
use num_traits::One;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Sturm,
    Descartes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplicityPolicy {
    /// Count each distinct real root once (the Sturm chain's natural output).
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCountResult {
    pub count: usize,
    pub method: CountMethod,
    /// Always true on a successful return: uncertified paths must escalate
    /// or fail.
    pub certified: bool,
    /// Exact-arithmetic escalations spent by the subdivision backend.
    pub escalations: usize,
    pub policy: MultiplicityPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PieceKind {
    Direct,
    Reciprocal,
}

/// Split a query into bounded pieces on `p` (inside `[-1, 1]`) and on the
/// reciprocal polynomial (outside), with no point counted twice.
fn split_query(interval: &Interval) -> Vec<(PieceKind, FiniteInterval)> {
    let one = BigRational::one();
    let neg_one = -BigRational::one();
    let mut out = Vec::new();

    // piece inside [-1, 1]
    let d_lo = match &interval.lo {
        Endpoint::NegInf => Some((neg_one.clone(), true)),
        Endpoint::PosInf => None,
        Endpoint::Finite { value, closed } => {
            if value > &one {
                None
            } else if value >= &neg_one {
                Some((value.clone(), *closed))
            } else {
                Some((neg_one.clone(), true))
            }
        }
    };
    let d_hi = match &interval.hi {
        Endpoint::PosInf => Some((one.clone(), true)),
        Endpoint::NegInf => None,
        Endpoint::Finite { value, closed } => {
            if value < &neg_one {
                None
            } else if value <= &one {
                Some((value.clone(), *closed))
            } else {
                Some((one.clone(), true))
            }
        }
    };
    if let (Some((a, ac)), Some((b, bc))) = (d_lo, d_hi) {
        if a < b || (a == b && ac && bc) {
            out.push((
                PieceKind::Direct,
                FiniteInterval { lo: a, hi: b, lo_closed: ac, hi_closed: bc },
            ));
        }
    }

    // piece in (1, inf), mapped to (0, 1) on the reciprocal
    let u_lo = match &interval.lo {
        Endpoint::PosInf => None,
        Endpoint::NegInf => Some((one.clone(), false)),
        Endpoint::Finite { value, closed } => {
            if value <= &one {
                Some((one.clone(), false))
            } else {
                Some((value.clone(), *closed))
            }
        }
    };
    let u_hi = match &interval.hi {
        Endpoint::PosInf => Some(None),
        Endpoint::NegInf => None,
        Endpoint::Finite { value, closed } => {
            if value > &one {
                Some(Some((value.clone(), *closed)))
            } else {
                None
            }
        }
    };
    if let (Some((a, ac)), Some(hi)) = (u_lo, u_hi) {
        // y = 1/x maps (a, b] onto [1/b, 1/a)
        let (y_lo, y_lo_closed) = match &hi {
            None => (BigRational::from_integer(0.into()), false),
            Some((b, bc)) => (one.clone() / b.clone(), *bc),
        };
        let y = FiniteInterval {
            lo: y_lo,
            hi: one.clone() / a.clone(),
            lo_closed: y_lo_closed,
            hi_closed: ac,
        };
        let nonempty = y.lo < y.hi || (y.lo == y.hi && y.lo_closed && y.hi_closed);
        if nonempty {
            out.push((PieceKind::Reciprocal, y));
        }
    }

    // piece in (-inf, -1), mapped to (-1, 0) on the reciprocal
    let l_hi = match &interval.hi {
        Endpoint::NegInf => None,
        Endpoint::PosInf => Some((neg_one.clone(), false)),
        Endpoint::Finite { value, closed } => {
            if value >= &neg_one {
                Some((neg_one.clone(), false))
            } else {
                Some((value.clone(), *closed))
            }
        }
    };
    let l_lo = match &interval.lo {
        Endpoint::NegInf => Some(None),
        Endpoint::PosInf => None,
        Endpoint::Finite { value, closed } => {
            if value < &neg_one {
                Some(Some((value.clone(), *closed)))
            } else {
                None
            }
        }
    };
    if let (Some(lo), Some((b, bc))) = (l_lo, l_hi) {
        let fi = match &lo {
            None => FiniteInterval {
                lo: one.clone() / b.clone(),
                hi: BigRational::from_integer(0.into()),
                lo_closed: bc,
                hi_closed: false,
            },
            Some((a, ac)) => reciprocal_of(&FiniteInterval {
                lo: a.clone(),
                hi: b.clone(),
                lo_closed: *ac,
                hi_closed: bc,
            }),
        };
        let nonempty = fi.lo < fi.hi || (fi.lo == fi.hi && fi.lo_closed && fi.hi_closed);
        if nonempty {
            out.push((PieceKind::Reciprocal, fi));
        }
    }

    out
}

fn count_pieces<F>(
    sample: &PolynomialSample,
    interval: &Interval,
    mut backend: F,
) -> Result<(usize, usize), RootCountError>
where
    F: FnMut(&PolynomialSample, &FiniteInterval) -> Result<(usize, usize), RootCountError>,
{
    if sample.is_zero() {
        return Err(RootCountError::ZeroPolynomial);
    }
    let pieces = split_query(interval);
    let mut reversed: Option<PolynomialSample> = None;
    let mut count = 0;
    let mut escalations = 0;
    for (kind, fi) in &pieces {
        let poly: &PolynomialSample = match kind {
            PieceKind::Direct => sample,
            PieceKind::Reciprocal => {
                reversed.get_or_insert_with(|| sample.reciprocal_transform())
            }
        };
        let (c, e) = backend(poly, fi)?;
        count += c;
        escalations += e;
    }
    Ok((count, escalations))
}

/// Exact Sturm count on any interval.
pub fn sturm_count(
    sample: &PolynomialSample,
    interval: &Interval,
) -> Result<RootCountResult, RootCountError> {
    let (count, _) = count_pieces(sample, interval, |p, fi| {
        sturm::sturm_count_finite(p, fi).map(|c| (c, 0))
    })?;
    Ok(RootCountResult {
        count,
        method: CountMethod::Sturm,
        certified: true,
        escalations: 0,
        policy: MultiplicityPolicy::Distinct,
    })
}

/// Certified subdivision count on any interval.
pub fn descartes_count(
    sample: &PolynomialSample,
    interval: &Interval,
    budget: &DescartesBudget,
) -> Result<RootCountResult, RootCountError> {
    let (count, escalations) = count_pieces(sample, interval, |p, fi| {
        descartes::descartes_count_finite(p, fi, budget)
    })?;
    Ok(RootCountResult {
        count,
        method: CountMethod::Descartes,
        certified: true,
        escalations,
        policy: MultiplicityPolicy::Distinct,
    })
}

/// Degree at or below which the dispatcher prefers the exact oracle.
pub const STURM_DISPATCH_DEGREE: usize = 64;
/// Degree cap for the Sturm fallback after a failed subdivision; above it
/// the `Unresolved` error propagates for the caller to flag.
pub const STURM_FALLBACK_DEGREE: usize = 2_048;

/// Dispatching counter: the exact oracle at low degree, subdivision above
/// it, with an exact retry when subdivision gives up on a feasible degree.
pub fn count_roots(
    sample: &PolynomialSample,
    interval: &Interval,
) -> Result<RootCountResult, RootCountError> {
    let degree = sample.effective_degree().ok_or(RootCountError::ZeroPolynomial)?;
    if degree <= STURM_DISPATCH_DEGREE {
        return sturm_count(sample, interval);
    }
    match descartes_count(sample, interval, &DescartesBudget::default()) {
        Ok(result) => Ok(result),
        Err(RootCountError::Unresolved { .. }) if degree <= STURM_FALLBACK_DEGREE => {
            sturm_count(sample, interval)
        }
        Err(e) => Err(e),
    }
}

/// Search for a point where `|p|` and `|p'|` are simultaneously below
/// `n^-threshold_exp`: a near-double-root witness. The scan walks a grid of
/// pitch `max(n^-pitch_exp, 1e-7)` and refines the lowest local minima of
/// `max(|p|, |p'|)`; a returned witness is verified by certified evaluation,
/// absence of one is a normal return.
pub fn double_root_witness(
    sample: &PolynomialSample,
    interval: &Interval,
    threshold_exp: f64,
    pitch_exp: f64,
) -> Option<f64> {
    let fi = interval.as_finite().expect("witness search needs a bounded interval");
    let n = sample.effective_degree()? as f64;
    if n < 1.0 {
        return None;
    }
    let thresh = n.powf(-threshold_exp);
    let pitch = n.powf(-pitch_exp).max(1e-7);
    let lo = fi.lo.to_f64()?;
    let hi = fi.hi.to_f64()?;
    if !(hi > lo) {
        return None;
    }
    let steps = (((hi - lo) / pitch).ceil() as usize).clamp(2, 4_000_000);
    let g = |x: f64| {
        let p = sample.eval(x, 0).value.abs();
        let d = sample.eval(x, 1).value.abs();
        p.max(d)
    };
    // grid scan: keep the lowest few separated local minima
    let mut candidates: Vec<(f64, f64)> = Vec::new(); // (g, x)
    let mut prev2 = f64::INFINITY;
    let mut prev = g(lo);
    for k in 1..=steps {
        let x = lo + (hi - lo) * k as f64 / steps as f64;
        let cur = g(x);
        if prev <= prev2 && prev <= cur {
            let xm = lo + (hi - lo) * (k - 1) as f64 / steps as f64;
            candidates.push((prev, xm));
        }
        prev2 = prev;
        prev = cur;
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.truncate(8);
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
    for &(_, x0) in &candidates {
        // three rounds of tenfold zoom around the candidate
        let mut best = x0;
        let mut radius = (hi - lo) / steps as f64;
        for _ in 0..3 {
            let mut local = (g(best), best);
            for i in -10i32..=10 {
                let x = (best + i as f64 * radius / 10.0).clamp(lo, hi);
                let v = g(x);
                if v < local.0 {
                    local = (v, x);
                }
            }
            best = local.1;
            radius /= 10.0;
        }
        let p = sample.eval(best, 0);
        let d = sample.eval(best, 1);
        if p.abs_upper() <= thresh && d.abs_upper() <= thresh {
            return Some(best);
        }
    }
    None
}

/// Absolute root-count difference of two samples over one interval.
pub fn pairing_defect(
    f: &PolynomialSample,
    g: &PolynomialSample,
    interval: &Interval,
) -> Result<usize, RootCountError> {
    let nf = count_roots(f, interval)?.count;
    let ng = count_roots(g, interval)?.count;
    Ok(nf.abs_diff(ng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{rational_from_f64, rational_from_int};
    use crate::laws::CoefficientLaw;

    #[test]
    fn quadratic_on_half_line() {
        // x^2 - 1 on [0, 2]
        let p = PolynomialSample::from_f64_coefficients(&[-1.0, 0.0, 1.0]);
        let r = count_roots(&p, &Interval::closed_f64(0.0, 2.0)).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.method, CountMethod::Sturm);
        assert!(r.certified);
    }

    #[test]
    fn unbounded_via_reciprocal() {
        // x - 2 on [1, inf)
        let p = PolynomialSample::from_f64_coefficients(&[-2.0, 1.0]);
        let ray = Interval::ray_up(rational_from_int(1), true);
        assert_eq!(count_roots(&p, &ray).unwrap().count, 1);
        assert_eq!(
            descartes_count(&p, &ray, &DescartesBudget::default()).unwrap().count,
            1
        );
        // no roots below -1
        let down = Interval::ray_down(rational_from_int(-1), true);
        assert_eq!(count_roots(&p, &down).unwrap().count, 0);
    }

    #[test]
    fn real_line_decomposition_adds_up() {
        // roots at -3, -1/2, 2/5, 7 : (x+3)(2x+1)(5x-2)(x-7)
        // = 10x^4 - 35x^3 - 179x^2 - 5.5x... build from factors numerically
        let p = PolynomialSample::from_f64_coefficients(&[42.0, -41.0, -176.0, -25.0, 10.0]);
        // sanity: count everything
        let total = count_roots(&p, &Interval::real_line()).unwrap().count;
        assert_eq!(total, 4);
        let a = count_roots(&p, &Interval::ray_down(rational_from_int(-1), true))
            .unwrap()
            .count;
        let b = count_roots(
            &p,
            &Interval::new(
                Endpoint::Finite { value: rational_from_int(-1), closed: false },
                Endpoint::Finite { value: rational_from_int(0), closed: false },
            ),
        )
        .unwrap()
        .count;
        let c = count_roots(&p, &Interval::closed_f64(0.0, 1.0)).unwrap().count;
        let d = count_roots(
            &p,
            &Interval::new(
                Endpoint::Finite { value: rational_from_int(1), closed: false },
                Endpoint::PosInf,
            ),
        )
        .unwrap()
        .count;
        assert_eq!(a + b + c + d, total);
    }

    #[test]
    fn reciprocal_symmetry_counts() {
        let law = CoefficientLaw::gaussian();
        for trial in 0..50 {
            let p = PolynomialSample::sample(&law, 20, 2024, trial);
            if p.coefficients()[0].is_zero() {
                continue;
            }
            let up = count_roots(&p, &Interval::ray_up(rational_from_int(1), true))
                .unwrap()
                .count;
            let star = p.reciprocal_transform();
            let unit = count_roots(
                &star,
                &Interval::new(
                    Endpoint::Finite { value: rational_from_int(0), closed: false },
                    Endpoint::Finite { value: rational_from_int(1), closed: true },
                ),
            )
            .unwrap()
            .count;
            assert_eq!(up, unit, "trial {trial}");
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let z = PolynomialSample::from_f64_coefficients(&[0.0]);
        assert!(matches!(
            count_roots(&z, &Interval::closed_f64(0.0, 1.0)),
            Err(RootCountError::ZeroPolynomial)
        ));
    }

    #[test]
    fn witness_on_exact_double_root() {
        // (x - 1/2)^2
        let p = PolynomialSample::from_f64_coefficients(&[0.25, -1.0, 1.0]);
        let w = double_root_witness(&p, &Interval::closed_f64(0.0, 1.0), 3.0, 2.0);
        let x = w.expect("double root should yield a witness");
        assert!((x - 0.5).abs() < 1e-3);
    }

    #[test]
    fn witness_absent_for_steep_line() {
        let p = PolynomialSample::from_f64_coefficients(&[-0.5, 1.0]);
        // |p'| = 1 everywhere, so no point passes the 1e-6-ish threshold
        assert!(double_root_witness(&p, &Interval::closed_f64(0.0, 1.0), 6.0, 2.0).is_none());
    }

    #[test]
    fn defect_zero_for_identical_inputs() {
        let p = PolynomialSample::from_f64_coefficients(&[-1.0, 0.0, 1.0]);
        assert_eq!(pairing_defect(&p, &p, &Interval::closed_f64(0.0, 2.0)).unwrap(), 0);
    }

    #[test]
    fn defect_small_under_perturbation() {
        let f = PolynomialSample::from_f64_coefficients(&[-1.0, 0.0, 1.0]);
        let g = PolynomialSample::from_f64_coefficients(&[-1.0 + 1e-9, 0.0, 1.0]);
        let d = pairing_defect(&f, &g, &Interval::closed_f64(0.0, 2.0)).unwrap();
        assert!(d <= 1);
    }

    #[test]
    fn monotone_nesting_of_counts() {
        let law = CoefficientLaw::gaussian();
        let p = PolynomialSample::sample(&law, 24, 7, 1);
        let inner = count_roots(&p, &Interval::closed_f64(0.0, 0.5)).unwrap().count;
        let outer = count_roots(&p, &Interval::closed_f64(-1.0, 1.0)).unwrap().count;
        assert!(inner <= outer);
    }

    #[test]
    fn additivity_on_half_open_split() {
        let law = CoefficientLaw::gaussian();
        for trial in 0..40 {
            let p = PolynomialSample::sample(&law, 18, 555, trial);
            let whole = count_roots(&p, &Interval::closed_f64(-1.0, 1.0)).unwrap().count;
            let left = count_roots(
                &p,
                &Interval::closed(rational_from_f64(-1.0), rational_from_f64(0.0)),
            )
            .unwrap()
            .count;
            let right = count_roots(
                &p,
                &Interval::open_closed(rational_from_f64(0.0), rational_from_f64(1.0)),
            )
            .unwrap()
            .count;
            assert_eq!(left + right, whole, "trial {trial}");
        }
    }
}
