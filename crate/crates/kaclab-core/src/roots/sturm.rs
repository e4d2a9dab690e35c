//! Exact root counting over the rationals via Sturm chains.
//!
//! This is the oracle the faster subdivision counter is checked against:
//! every step is big-integer arithmetic, so the returned count is an exact
//! statement about the sampled polynomial.

use crate::dyadic::to_scaled_integers;
use crate::error::RootCountError;
use crate::interval::FiniteInterval;
use crate::poly::PolynomialSample;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

/// Divide by the positive content.
pub(crate) fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let mut content = BigInt::zero();
    for c in &p {
        content = content.gcd(c);
        if content.is_one() {
            return p;
        }
    }
    if content.is_zero() || content.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &content).collect()
}

pub(crate) fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * BigInt::from(j))
        .collect()
}

/// Next Sturm chain element: a positive multiple of `-(f mod g)`.
///
/// The elimination loop multiplies `f` by the leading coefficient of `g`,
/// so the accumulated scalar is `lc(g)^k`; when that scalar is negative the
/// remainder already carries the wanted minus sign.
fn negated_pseudo_remainder(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let lg = g.last().expect("divisor must be nonzero").clone();
    let dg = degree(g);
    let mut r = f.to_vec();
    let mut mults: usize = 0;
    while !r.is_empty() && degree(&r) >= dg && r.len() > 1 {
        let dr = degree(&r);
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lg;
        }
        for j in 0..=dg {
            let sub = &lr * &g[j];
            r[dr - dg + j] -= sub;
        }
        r = trim(r);
        mults += 1;
        if dg == 0 {
            // dividing by a constant leaves remainder zero
            return Vec::new();
        }
    }
    let scalar_negative = lg.is_negative() && mults % 2 == 1;
    if !scalar_negative {
        for c in r.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    r
}

fn sturm_chain(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let p = primitive(trim(p));
    assert!(!p.is_empty());
    let mut chain = vec![p];
    if degree(&chain[0]) == 0 {
        return chain;
    }
    chain.push(primitive(derivative(&chain[0])));
    loop {
        let k = chain.len();
        let r = negated_pseudo_remainder(&chain[k - 2], &chain[k - 1]);
        let r = trim(r);
        if r.is_empty() {
            break;
        }
        chain.push(primitive(r));
    }
    chain
}

/// Sign of `p(num/den)` with `den > 0`, via denominator-cleared Horner.
pub(crate) fn eval_sign(p: &[BigInt], num: &BigInt, den: &BigInt) -> i8 {
    debug_assert!(den.is_positive());
    let d = degree(p);
    let mut acc = p[d].clone();
    let mut den_pow = BigInt::one();
    for j in (0..d).rev() {
        den_pow *= den;
        acc = acc * num + &p[j] * &den_pow;
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

fn variations_at(chain: &[Vec<BigInt>], x: &BigRational) -> usize {
    let num = x.numer();
    let den = x.denom();
    let mut changes = 0;
    let mut last: i8 = 0;
    for p in chain {
        let s = eval_sign(p, num, den);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Exact synthetic division by `(x - root)`; the remainder must vanish.
fn deflate_root(p: &[BigInt], root: &BigRational) -> Vec<BigInt> {
    let d = degree(p);
    let mut quotient: Vec<BigRational> = vec![BigRational::zero(); d];
    let mut acc = BigRational::from(p[d].clone());
    for j in (0..d).rev() {
        quotient[j] = acc.clone();
        acc = acc * root + BigRational::from(p[j].clone());
    }
    debug_assert!(acc.is_zero(), "deflation point is not a root");
    // clear denominators and re-primitivize
    let mut lcm = BigInt::one();
    for q in &quotient {
        lcm = lcm.lcm(q.denom());
    }
    primitive(
        quotient
            .into_iter()
            .map(|q| (q * BigRational::from(lcm.clone())).to_integer())
            .collect(),
    )
}

/// Sturm-based exact counter for one sample, reusable across intervals.
pub struct SturmEngine {
    /// Multiplicity of the root at the origin (vanishing coefficient prefix).
    vanish: usize,
    /// Prefix-stripped primitive integer polynomial; nonzero at the origin.
    stripped: Vec<BigInt>,
    chain: Vec<Vec<BigInt>>,
}

impl SturmEngine {
    pub fn new(sample: &PolynomialSample) -> Result<Self, RootCountError> {
        let (ints, _) = to_scaled_integers(sample.coefficients());
        let ints = trim(ints);
        if ints.is_empty() {
            return Err(RootCountError::ZeroPolynomial);
        }
        let vanish = ints.iter().position(|c| !c.is_zero()).unwrap();
        let stripped = primitive(ints[vanish..].to_vec());
        let chain = sturm_chain(stripped.clone());
        Ok(SturmEngine { vanish, stripped, chain })
    }

    /// Distinct real roots in the interval; the origin counts once however
    /// long the vanishing prefix is.
    pub fn count(&self, fi: &FiniteInterval) -> usize {
        let origin = usize::from(self.vanish >= 1 && fi.contains(&BigRational::zero()));
        if fi.is_point() {
            if fi.lo.is_zero() {
                return origin;
            }
            return usize::from(eval_sign(&self.stripped, fi.lo.numer(), fi.lo.denom()) == 0);
        }
        let sa = eval_sign(&self.stripped, fi.lo.numer(), fi.lo.denom());
        let sb = eval_sign(&self.stripped, fi.hi.numer(), fi.hi.denom());
        if sa != 0 && sb != 0 {
            let open = self.open_count(&self.chain, &fi.lo, &fi.hi);
            return origin + open;
        }
        // An endpoint is a root: deflate it away, then count the open part
        // with a fresh chain and add the closed-endpoint memberships.
        let mut poly = self.stripped.clone();
        let mut root_at_lo = false;
        while eval_sign(&poly, fi.lo.numer(), fi.lo.denom()) == 0 {
            root_at_lo = true;
            poly = deflate_root(&poly, &fi.lo);
        }
        let mut root_at_hi = false;
        while !poly.is_empty()
            && degree(&poly) >= 1
            && eval_sign(&poly, fi.hi.numer(), fi.hi.denom()) == 0
        {
            root_at_hi = true;
            poly = deflate_root(&poly, &fi.hi);
        }
        // constant remainder still handles membership below
        let open = if degree(&poly) >= 1 {
            let chain = sturm_chain(poly);
            self.open_count(&chain, &fi.lo, &fi.hi)
        } else {
            0
        };
        origin
            + open
            + usize::from(root_at_lo && fi.lo_closed)
            + usize::from(root_at_hi && fi.hi_closed)
    }

    fn open_count(&self, chain: &[Vec<BigInt>], a: &BigRational, b: &BigRational) -> usize {
        let va = variations_at(chain, a);
        let vb = variations_at(chain, b);
        debug_assert!(va >= vb, "sign variations must not increase");
        va - vb
    }
}

/// One-shot exact count on a bounded interval.
pub fn sturm_count_finite(
    sample: &PolynomialSample,
    fi: &FiniteInterval,
) -> Result<usize, RootCountError> {
    Ok(SturmEngine::new(sample)?.count(fi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rational_from_int;
    use crate::poly::PolynomialSample;

    fn closed(a: i64, b: i64) -> FiniteInterval {
        FiniteInterval {
            lo: rational_from_int(a),
            hi: rational_from_int(b),
            lo_closed: true,
            hi_closed: true,
        }
    }

    #[test]
    fn cubic_with_three_roots() {
        // x^3 - x has roots -1, 0, 1
        let p = PolynomialSample::from_f64_coefficients(&[0.0, -1.0, 0.0, 1.0]);
        assert_eq!(sturm_count_finite(&p, &closed(-2, 2)).unwrap(), 3);
        assert_eq!(sturm_count_finite(&p, &closed(0, 2)).unwrap(), 2);
        // open at both root endpoints
        let open = FiniteInterval {
            lo: rational_from_int(-1),
            hi: rational_from_int(1),
            lo_closed: false,
            hi_closed: false,
        };
        assert_eq!(sturm_count_finite(&p, &open).unwrap(), 1);
    }

    #[test]
    fn no_real_roots() {
        let p = PolynomialSample::from_f64_coefficients(&[1.0, 0.0, 1.0]);
        assert_eq!(sturm_count_finite(&p, &closed(-10, 10)).unwrap(), 0);
    }

    #[test]
    fn double_root_counted_once() {
        // (x-1)^2
        let p = PolynomialSample::from_f64_coefficients(&[1.0, -2.0, 1.0]);
        assert_eq!(sturm_count_finite(&p, &closed(0, 2)).unwrap(), 1);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let p = PolynomialSample::from_f64_coefficients(&[0.0, 0.0]);
        assert!(matches!(
            sturm_count_finite(&p, &closed(0, 1)),
            Err(RootCountError::ZeroPolynomial)
        ));
    }

    #[test]
    fn point_interval() {
        let p = PolynomialSample::from_f64_coefficients(&[-1.0, 0.0, 1.0]);
        let at_root = FiniteInterval {
            lo: rational_from_int(1),
            hi: rational_from_int(1),
            lo_closed: true,
            hi_closed: true,
        };
        assert_eq!(sturm_count_finite(&p, &at_root).unwrap(), 1);
        let off_root = FiniteInterval {
            lo: rational_from_int(2),
            hi: rational_from_int(2),
            lo_closed: true,
            hi_closed: true,
        };
        assert_eq!(sturm_count_finite(&p, &off_root).unwrap(), 0);
    }

    #[test]
    fn vanishing_prefix_counts_origin_once() {
        // x^3 (x - 2) = -2x^3 + x^4
        let p = PolynomialSample::from_f64_coefficients(&[0.0, 0.0, 0.0, -2.0, 1.0]);
        assert_eq!(sturm_count_finite(&p, &closed(-1, 1)).unwrap(), 1);
        assert_eq!(sturm_count_finite(&p, &closed(-1, 3)).unwrap(), 2);
        let no_zero = FiniteInterval {
            lo: rational_from_int(0),
            hi: rational_from_int(3),
            lo_closed: false,
            hi_closed: true,
        };
        assert_eq!(sturm_count_finite(&p, &no_zero).unwrap(), 1);
    }

    #[test]
    fn endpoint_root_with_open_flag_excluded() {
        // roots 0 and 1 of x(x-1) = -x + x^2... coefficients [0, -1, 1]
        let p = PolynomialSample::from_f64_coefficients(&[0.0, -1.0, 1.0]);
        let half_open = FiniteInterval {
            lo: rational_from_int(0),
            hi: rational_from_int(1),
            lo_closed: false,
            hi_closed: true,
        };
        assert_eq!(sturm_count_finite(&p, &half_open).unwrap(), 1);
    }

    #[test]
    fn wilkinson_like_dense_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let p = PolynomialSample::from_f64_coefficients(&[-6.0, 11.0, -6.0, 1.0]);
        assert_eq!(sturm_count_finite(&p, &closed(0, 4)).unwrap(), 3);
        assert_eq!(sturm_count_finite(&p, &closed(1, 3)).unwrap(), 3);
        assert_eq!(sturm_count_finite(&p, &closed(2, 2)).unwrap(), 1);
    }
}
