//! Certified root counting by sign-variation subdivision.
//!
//! Boxes are resolved by a ladder of increasingly expensive certificates:
//!
//! 1. a certified floating range of `p` over the box (no sign change: empty),
//! 2. a certified floating range of `p'` (monotone: endpoint signs decide),
//! 3. the exact sign-variation count of the Mobius-rescaled box polynomial
//!    (Descartes' rule of signs over big integers; variation 0 or 1 decides),
//!
//! and otherwise the box is bisected at a dyadic point whose sign the
//! floating ladder can certify, falling back to an exact sign only when a
//! cluster of near-root candidates defeats every jiggled split point.
//! Exact integers are materialized lazily: a count that the floating ladder
//! fully resolves never touches big-integer arithmetic. A square-free input
//! always terminates; a multiple root that is not a dyadic boundary or split
//! point exhausts the budget and surfaces as an explicit `Unresolved` error
//! instead of a wrong count.

use crate::ball::CertifiedValue;
use crate::dyadic::{to_scaled_integers, DyadicCoefficient};
use crate::error::RootCountError;
use crate::interval::FiniteInterval;
use crate::poly::PolynomialSample;
use crate::roots::sturm::{derivative, eval_sign, primitive, trim};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::OnceCell;

/// Caps on the work one `descartes_count` call may spend.
#[derive(Debug, Clone, Copy)]
pub struct DescartesBudget {
    /// Boxes processed before giving up.
    pub max_boxes: usize,
    /// Exact big-integer operations (sign evaluations and box transforms).
    pub max_exact_ops: usize,
    /// Degree above which the exact box transform is not attempted.
    pub transform_degree_cap: usize,
}

impl Default for DescartesBudget {
    fn default() -> Self {
        DescartesBudget {
            max_boxes: 100_000,
            max_exact_ops: 4_096,
            transform_degree_cap: 4_096,
        }
    }
}

fn horner_balls(coeffs: &[CertifiedValue], x: CertifiedValue) -> CertifiedValue {
    let mut acc = CertifiedValue::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

fn big_to_ball(c: &BigInt) -> CertifiedValue {
    match c.to_f64() {
        Some(v) if v.is_finite() => {
            // conversion rounds to nearest: half an ulp of slop either way
            CertifiedValue { value: v, radius: v.abs() * 2.3e-16 + 1e-300 }
        }
        _ => CertifiedValue { value: 0.0, radius: f64::INFINITY },
    }
}

/// A dyadic box `(lo/2^scale, hi/2^scale)` with exactly-known endpoint signs.
struct DyadicBox {
    scale: u32,
    lo: BigInt,
    hi: BigInt,
    sign_lo: i8,
    sign_hi: i8,
    depth: u32,
}

/// One subdivision task: certified coefficient balls for the fast path and
/// a lazily-built exact integer image for escalations.
struct Subdivision<'a> {
    coeff_balls: Vec<CertifiedValue>,
    deriv_balls: Vec<CertifiedValue>,
    dyadic_source: Option<&'a [DyadicCoefficient]>,
    ints_cell: OnceCell<Vec<BigInt>>,
}

impl<'a> Subdivision<'a> {
    fn from_dyadic(coeffs: &'a [DyadicCoefficient], values: &[f64]) -> Self {
        let coeff_balls: Vec<CertifiedValue> =
            values.iter().map(|&v| CertifiedValue::exact(v)).collect();
        let deriv_balls: Vec<CertifiedValue> = values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &v)| CertifiedValue::exact(j as f64).mul(CertifiedValue::exact(v)))
            .collect();
        Subdivision {
            coeff_balls,
            deriv_balls,
            dyadic_source: Some(coeffs),
            ints_cell: OnceCell::new(),
        }
    }

    fn from_ints(ints: Vec<BigInt>) -> Self {
        let coeff_balls: Vec<CertifiedValue> = ints.iter().map(big_to_ball).collect();
        let deriv_ints = derivative(&ints);
        let deriv_balls: Vec<CertifiedValue> = deriv_ints.iter().map(big_to_ball).collect();
        let cell = OnceCell::new();
        cell.set(ints).ok();
        Subdivision { coeff_balls, deriv_balls, dyadic_source: None, ints_cell: cell }
    }

    fn ints(&self) -> &[BigInt] {
        self.ints_cell.get_or_init(|| {
            let coeffs = self.dyadic_source.expect("integer image available");
            let (ints, _) = to_scaled_integers(coeffs);
            primitive(ints)
        })
    }

    fn degree(&self) -> usize {
        self.coeff_balls.len() - 1
    }

    fn cover_f64(&self, num: &BigInt, scale: u32) -> (f64, f64) {
        let v = num.to_f64().unwrap_or(if num.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }) * 2f64.powi(-(scale as i32));
        (v.next_down(), v.next_up())
    }

    fn point_ball(&self, num: &BigInt, scale: u32) -> CertifiedValue {
        let (lo, hi) = self.cover_f64(num, scale);
        CertifiedValue::from_interval(lo, hi)
    }

    fn box_ball(&self, b: &DyadicBox) -> CertifiedValue {
        let (lo, _) = self.cover_f64(&b.lo, b.scale);
        let (_, hi) = self.cover_f64(&b.hi, b.scale);
        CertifiedValue::from_interval(lo, hi)
    }

    /// Exact sign of the polynomial at a dyadic point.
    fn exact_sign(&self, num: &BigInt, scale: u32) -> i8 {
        let den: BigInt = BigInt::one() << scale as usize;
        eval_sign(self.ints(), num, &den)
    }

    /// Exact Descartes variation count of the box polynomial: bounds the
    /// number of roots in the open box (with multiplicity) and is exact
    /// when 0 or 1.
    fn box_variations(&self, b: &DyadicBox) -> usize {
        let ints = self.ints();
        let d = ints.len() - 1;
        let width = &b.hi - &b.lo;
        // scale coefficients so the Taylor shift argument is integral
        let mut c: Vec<BigInt> = ints
            .iter()
            .enumerate()
            .map(|(j, v)| v.clone() << ((d - j) as u32 * b.scale) as usize)
            .collect();
        // Taylor shift by lo
        for i in 0..d {
            for j in (i..d).rev() {
                let add = &b.lo * &c[j + 1];
                c[j] += add;
            }
        }
        // substitute sigma -> width * z
        let mut pow = BigInt::one();
        for (j, coeff) in c.iter_mut().enumerate() {
            if j > 0 {
                pow *= &width;
                *coeff *= &pow;
            }
        }
        // z -> 1/(1+t): reverse then Taylor shift by one
        c.reverse();
        for i in 0..d {
            for j in (i..d).rev() {
                let add = c[j + 1].clone();
                c[j] += add;
            }
        }
        let mut var = 0usize;
        let mut last: i8 = 0;
        for coeff in &c {
            let s = match coeff.sign() {
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
            };
            if s != 0 {
                if last != 0 && s != last {
                    var += 1;
                }
                last = s;
            }
        }
        var
    }
}

struct Counter<'a, 'b> {
    problem: &'b Subdivision<'a>,
    budget: DescartesBudget,
    boxes_used: usize,
    exact_ops: usize,
}

impl<'a, 'b> Counter<'a, 'b> {
    /// Certified sign at a dyadic point, exact when the floating ladder
    /// cannot decide.
    fn sign_at(&mut self, num: &BigInt, scale: u32) -> Result<i8, RootCountError> {
        let ball = horner_balls(&self.problem.coeff_balls, self.problem.point_ball(num, scale));
        if let Some(s) = ball.sign() {
            return Ok(s);
        }
        self.spend_exact(1)?;
        Ok(self.problem.exact_sign(num, scale))
    }

    fn spend_exact(&mut self, undecided: usize) -> Result<(), RootCountError> {
        self.exact_ops += 1;
        if self.exact_ops > self.budget.max_exact_ops {
            Err(RootCountError::Unresolved { undecided, escalations: self.exact_ops })
        } else {
            Ok(())
        }
    }

    /// Split point inside the box with a certifiable sign: the midpoint or
    /// a nearby dyadic jiggle, with an exact midpoint sign as last resort.
    fn choose_split(&mut self, b: &DyadicBox) -> Result<(BigInt, u32, i8), RootCountError> {
        let scale = b.scale + 4;
        let lo16 = &b.lo << 4usize;
        let width = &b.hi - &b.lo;
        for sixteenths in [8u32, 7, 9, 5, 11] {
            let num = &lo16 + &width * BigInt::from(sixteenths);
            let ball =
                horner_balls(&self.problem.coeff_balls, self.problem.point_ball(&num, scale));
            if let Some(s) = ball.sign() {
                return Ok((num, scale, s));
            }
        }
        // every jiggled candidate hugs a root: resolve the midpoint exactly
        let num = &lo16 + &width * BigInt::from(8u32);
        self.spend_exact(1)?;
        Ok((num.clone(), scale, self.problem.exact_sign(&num, scale)))
    }

    /// Distinct roots in the open box.
    fn count_open(&mut self, initial: DyadicBox) -> Result<usize, RootCountError> {
        let mut stack = vec![initial];
        let mut count = 0usize;
        while let Some(b) = stack.pop() {
            self.boxes_used += 1;
            if self.boxes_used > self.budget.max_boxes {
                return Err(RootCountError::Unresolved {
                    undecided: stack.len() + 1,
                    escalations: self.exact_ops,
                });
            }
            let x = self.problem.box_ball(&b);
            if horner_balls(&self.problem.coeff_balls, x).decided() {
                continue; // certified sign over the whole box: no roots
            }
            if horner_balls(&self.problem.deriv_balls, x).decided() {
                // strictly monotone: a root exists iff the endpoint signs
                // straddle zero; a zero endpoint sign leaves the open
                // interior rootless
                if b.sign_lo * b.sign_hi < 0 {
                    count += 1;
                }
                continue;
            }
            if b.depth >= 4 && self.transform_feasible(&b) {
                self.spend_exact(stack.len() + 1)?;
                match self.problem.box_variations(&b) {
                    0 => continue,
                    1 => {
                        count += 1;
                        continue;
                    }
                    _ => {}
                }
            }
            let (num, scale, sign_mid) = self.choose_split(&b)?;
            if sign_mid == 0 {
                count += 1;
            }
            let up = (scale - b.scale) as usize;
            stack.push(DyadicBox {
                scale,
                lo: &b.lo << up,
                hi: num.clone(),
                sign_lo: b.sign_lo,
                sign_hi: sign_mid,
                depth: b.depth + 1,
            });
            stack.push(DyadicBox {
                scale,
                lo: num,
                hi: &b.hi << up,
                sign_lo: sign_mid,
                sign_hi: b.sign_hi,
                depth: b.depth + 1,
            });
        }
        Ok(count)
    }

    fn transform_feasible(&self, b: &DyadicBox) -> bool {
        let d = self.problem.degree();
        if d > self.budget.transform_degree_cap {
            return false;
        }
        // rough work gate: the transform costs ~ d^2 additions of
        // numbers around d * scale bits
        (d * d).saturating_mul(b.scale as usize) <= 400_000_000
    }
}

fn is_dyadic(r: &BigRational) -> Option<(BigInt, u32)> {
    let den = r.denom();
    let minus_one = den - BigInt::one();
    if (den & &minus_one).is_zero() {
        Some((r.numer().clone(), (den.bits() - 1) as u32))
    } else {
        None
    }
}

/// Certified count of distinct real roots in a bounded interval.
/// Returns `(count, escalations)`.
pub fn descartes_count_finite(
    sample: &PolynomialSample,
    fi: &FiniteInterval,
    budget: &DescartesBudget,
) -> Result<(usize, usize), RootCountError> {
    if sample.is_zero() {
        return Err(RootCountError::ZeroPolynomial);
    }
    let vanish = sample.vanishing_prefix();
    let origin = usize::from(vanish >= 1 && fi.contains(&BigRational::zero()));
    let problem = Subdivision::from_dyadic(
        &sample.coefficients()[vanish..],
        &sample.coefficients_f64()[vanish..],
    );
    let mut counter = Counter { problem: &problem, budget: *budget, boxes_used: 0, exact_ops: 0 };

    if fi.is_point() {
        if fi.lo.is_zero() {
            return Ok((origin, 0));
        }
        let s = match is_dyadic(&fi.lo) {
            Some((num, scale)) => counter.sign_at(&num, scale)?,
            None => {
                counter.spend_exact(1)?;
                eval_sign(problem.ints(), fi.lo.numer(), fi.lo.denom())
            }
        };
        return Ok((usize::from(s == 0), counter.exact_ops));
    }

    let mut endpoint_sign = |counter: &mut Counter, x: &BigRational| -> Result<i8, RootCountError> {
        match is_dyadic(x) {
            Some((num, scale)) => counter.sign_at(&num, scale),
            None => {
                counter.spend_exact(1)?;
                Ok(eval_sign(problem.ints(), x.numer(), x.denom()))
            }
        }
    };
    let sign_lo = endpoint_sign(&mut counter, &fi.lo)?;
    let sign_hi = endpoint_sign(&mut counter, &fi.hi)?;
    let mut count = origin;
    // endpoint membership (the origin is already counted via the prefix)
    if fi.lo_closed && sign_lo == 0 && !fi.lo.is_zero() {
        count += 1;
    }
    if fi.hi_closed && sign_hi == 0 && !fi.hi.is_zero() {
        count += 1;
    }

    let open = match (is_dyadic(&fi.lo), is_dyadic(&fi.hi)) {
        (Some((lo_num, lo_scale)), Some((hi_num, hi_scale))) => {
            let scale = lo_scale.max(hi_scale);
            let initial = DyadicBox {
                scale,
                lo: lo_num << (scale - lo_scale) as usize,
                hi: hi_num << (scale - hi_scale) as usize,
                sign_lo,
                sign_hi,
                depth: 0,
            };
            counter.count_open(initial)?
        }
        _ => {
            // Non-dyadic endpoints: one exact affine substitution maps the
            // query onto [0, 1], after which every split point is dyadic.
            if problem.degree() > budget.transform_degree_cap {
                return Err(RootCountError::Unresolved {
                    undecided: 1,
                    escalations: counter.exact_ops,
                });
            }
            let mapped = affine_to_unit(problem.ints(), &fi.lo, &fi.hi);
            let unit_problem = Subdivision::from_ints(mapped);
            let mut unit_counter = Counter {
                problem: &unit_problem,
                budget: *budget,
                boxes_used: counter.boxes_used,
                exact_ops: counter.exact_ops + 1,
            };
            let initial = DyadicBox {
                scale: 0,
                lo: BigInt::zero(),
                hi: BigInt::one(),
                sign_lo,
                sign_hi,
                depth: 0,
            };
            let open = unit_counter.count_open(initial)?;
            counter.exact_ops = unit_counter.exact_ops;
            open
        }
    };
    Ok((count + open, counter.exact_ops))
}

/// Exact integer coefficients of `q(y) = p(lo + (hi - lo) y)` up to a
/// positive factor.
fn affine_to_unit(ints: &[BigInt], lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    let width = hi - lo;
    let mut c: Vec<BigRational> = ints.iter().map(|v| BigRational::from(v.clone())).collect();
    let d = c.len() - 1;
    // Taylor shift by lo
    for i in 0..d {
        for j in (i..d).rev() {
            let add = c[j + 1].clone() * lo;
            c[j] += add;
        }
    }
    // scale by the width
    let mut pow = BigRational::one();
    for (j, coeff) in c.iter_mut().enumerate() {
        if j > 0 {
            pow *= &width;
            *coeff *= pow.clone();
        }
    }
    // clear denominators
    let mut lcm = BigInt::one();
    for q in &c {
        lcm = num_integer::Integer::lcm(&lcm, q.denom());
    }
    primitive(
        trim(
            c.into_iter()
                .map(|q| (q * BigRational::from(lcm.clone())).to_integer())
                .collect(),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rational_from_int;

    fn closed(a: i64, b: i64) -> FiniteInterval {
        FiniteInterval {
            lo: rational_from_int(a),
            hi: rational_from_int(b),
            lo_closed: true,
            hi_closed: true,
        }
    }

    fn count(p: &PolynomialSample, fi: &FiniteInterval) -> usize {
        descartes_count_finite(p, fi, &DescartesBudget::default()).unwrap().0
    }

    #[test]
    fn cubic_with_three_roots() {
        let p = PolynomialSample::from_f64_coefficients(&[0.0, -1.0, 0.0, 1.0]);
        assert_eq!(count(&p, &closed(-2, 2)), 3);
        assert_eq!(count(&p, &closed(0, 2)), 2);
    }

    #[test]
    fn all_ones_has_no_roots_in_unit_interval() {
        let p = PolynomialSample::from_f64_coefficients(&[1.0; 13]);
        assert_eq!(count(&p, &closed(0, 1)), 0);
    }

    #[test]
    fn double_root_at_dyadic_point() {
        // (x - 1/2)^2 = 1/4 - x + x^2
        let p = PolynomialSample::from_f64_coefficients(&[0.25, -1.0, 1.0]);
        assert_eq!(count(&p, &closed(0, 1)), 1);
        // (x+1)^2 (x^2 - x + 1) = x^4 + x^3 + x + 1 has only the double root -1
        let q = PolynomialSample::from_f64_coefficients(&[1.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(count(&q, &closed(-2, 2)), 1);
        assert_eq!(count(&q, &closed(-2, -1)), 1);
    }

    #[test]
    fn double_root_at_non_dyadic_point() {
        // (3x + 1)^2 = 9x^2 + 6x + 1, double root at -1/3
        let p = PolynomialSample::from_f64_coefficients(&[1.0, 6.0, 9.0]);
        assert_eq!(count(&p, &closed(-2, 2)), 1);
        assert_eq!(count(&p, &closed(0, 2)), 0);
    }

    #[test]
    fn triple_root_at_origin() {
        // x^3 (x - 2)
        let p = PolynomialSample::from_f64_coefficients(&[0.0, 0.0, 0.0, -2.0, 1.0]);
        assert_eq!(count(&p, &closed(-1, 1)), 1);
        assert_eq!(count(&p, &closed(-1, 3)), 2);
    }

    #[test]
    fn non_dyadic_interval_endpoints() {
        // roots at 1/3 and 2/3: (3x-1)(3x-2) = 9x^2 - 9x + 2
        let p = PolynomialSample::from_f64_coefficients(&[2.0, -9.0, 9.0]);
        let fi = FiniteInterval {
            lo: BigRational::new(BigInt::from(1), BigInt::from(3)),
            hi: BigRational::new(BigInt::from(2), BigInt::from(3)),
            lo_closed: true,
            hi_closed: false,
        };
        assert_eq!(count(&p, &fi), 1);
        let fi_open = FiniteInterval { lo_closed: false, ..fi };
        assert_eq!(count(&p, &fi_open), 0);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = PolynomialSample::from_f64_coefficients(&[1.0, 6.0, 9.0]);
        let tiny = DescartesBudget { max_boxes: 4, max_exact_ops: 64, transform_degree_cap: 0 };
        assert!(matches!(
            descartes_count_finite(&p, &closed(-2, 2), &tiny),
            Err(RootCountError::Unresolved { .. })
        ));
    }

    #[test]
    fn matches_sturm_on_random_small_samples() {
        use crate::laws::CoefficientLaw;
        use crate::roots::sturm::sturm_count_finite;
        let law = CoefficientLaw::gaussian();
        for trial in 0..200 {
            let p = PolynomialSample::sample(&law, 12, 3141, trial);
            for fi in [closed(-2, 2), closed(0, 1), closed(-1, 0)] {
                let s = sturm_count_finite(&p, &fi).unwrap();
                let d = count(&p, &fi);
                assert_eq!(s, d, "trial {trial} interval {fi:?}");
            }
        }
    }

    #[test]
    fn high_degree_random_sample_is_fast_and_exact() {
        use crate::laws::CoefficientLaw;
        let law = CoefficientLaw::rademacher();
        let p = PolynomialSample::sample(&law, 512, 99, 0);
        let (d, _) = descartes_count_finite(&p, &closed(0, 1), &DescartesBudget::default()).unwrap();
        let s = crate::roots::sturm::sturm_count_finite(&p, &closed(0, 1)).unwrap();
        assert_eq!(d, s);
    }
}
