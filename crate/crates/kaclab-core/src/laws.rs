use crate::dyadic::DyadicCoefficient;
use crate::error::ConfigError;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Normal CDF, used for exact small-ball pairs of the continuous laws.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawKind {
    Gaussian,
    Rademacher,
    UniformSym,
    /// Mass `q0` at zero, mass `(1-q0)/2` at each of `±a` with
    /// `a = 1/sqrt(1-q0)` so the variance is exactly one.
    ThreePoint { q0: f64, atom: f64 },
}

/// An iid coefficient distribution together with its declared moment
/// metadata. All built-in laws have zero mean and unit variance; the
/// `(c0, q0)` pair certifies `P(|xi| < c0) <= q0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientLaw {
    pub kind: LawKind,
    pub mean: f64,
    pub variance: f64,
    /// Declared bound on `E|xi|^(2+epsilon)`.
    pub moment_bound: f64,
    pub epsilon: f64,
    pub small_ball_pair: Option<(f64, f64)>,
    spec: String,
}

impl CoefficientLaw {
    pub fn gaussian() -> Self {
        CoefficientLaw {
            kind: LawKind::Gaussian,
            mean: 0.0,
            variance: 1.0,
            // E|N(0,1)|^3 = 2*sqrt(2/pi)
            moment_bound: 2.0 * (2.0 / std::f64::consts::PI).sqrt(),
            epsilon: 1.0,
            small_ball_pair: Some((0.5, 2.0 * normal_cdf(0.5) - 1.0)),
            spec: "gaussian".to_string(),
        }
    }

    pub fn rademacher() -> Self {
        CoefficientLaw {
            kind: LawKind::Rademacher,
            mean: 0.0,
            variance: 1.0,
            moment_bound: 1.0,
            epsilon: 1.0,
            // support is {-1, +1}: P(|xi| < 1/2) = 0
            small_ball_pair: Some((0.5, 1e-6)),
            spec: "rademacher".to_string(),
        }
    }

    pub fn uniform_sym() -> Self {
        let half_width = 3f64.sqrt();
        CoefficientLaw {
            kind: LawKind::UniformSym,
            mean: 0.0,
            variance: 1.0,
            // E|U|^3 for U uniform on [-s, s], s = sqrt(3): s^3/4
            moment_bound: half_width.powi(3) / 4.0,
            epsilon: 1.0,
            small_ball_pair: Some((0.5, 0.5 / half_width)),
            spec: "uniform_sym".to_string(),
        }
    }

    pub fn three_point(q0: f64) -> Result<Self, ConfigError> {
        if !(q0 > 0.0 && q0 < 1.0) {
            return Err(ConfigError::LawParameter(format!(
                "three_point q0 must lie in (0,1), got {q0}"
            )));
        }
        let atom = 1.0 / (1.0 - q0).sqrt();
        Ok(CoefficientLaw {
            kind: LawKind::ThreePoint { q0, atom },
            mean: 0.0,
            variance: 1.0,
            // E|xi|^3 = a^3 (1-q0) = (1-q0)^(-1/2)
            moment_bound: (1.0 - q0).powf(-0.5),
            epsilon: 1.0,
            // any c0 in (0, a] works; take c0 = 1 <= a
            small_ball_pair: Some((1.0, q0)),
            spec: format!("three_point:q0={q0}"),
        })
    }

    /// Parse a law specification string: `gaussian`, `rademacher`,
    /// `uniform_sym`, or `three_point:q0=<float>`.
    pub fn parse(spec: &str) -> Result<Self, ConfigError> {
        match spec {
            "gaussian" => Ok(Self::gaussian()),
            "rademacher" => Ok(Self::rademacher()),
            "uniform_sym" => Ok(Self::uniform_sym()),
            _ => {
                if let Some(rest) = spec.strip_prefix("three_point:q0=") {
                    let q0: f64 = rest
                        .parse()
                        .map_err(|_| ConfigError::UnknownLaw(spec.to_string()))?;
                    Self::three_point(q0)
                } else {
                    Err(ConfigError::UnknownLaw(spec.to_string()))
                }
            }
        }
    }

    /// The canonical specification string this law parses from.
    pub fn spec_string(&self) -> &str {
        &self.spec
    }

    /// One iid draw, returned as the exact dyadic rational equal to the
    /// produced floating value.
    pub fn sample<R: Rng + ?Sized>(&self, stream: &mut R) -> DyadicCoefficient {
        let v = match self.kind {
            LawKind::Gaussian => StandardNormal.sample(stream),
            LawKind::Rademacher => {
                if stream.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            LawKind::UniformSym => {
                let u: f64 = stream.gen();
                (2.0 * u - 1.0) * 3f64.sqrt()
            }
            LawKind::ThreePoint { q0, atom } => {
                let u: f64 = stream.gen();
                if u < q0 {
                    0.0
                } else if u < q0 + (1.0 - q0) / 2.0 {
                    atom
                } else {
                    -atom
                }
            }
        };
        DyadicCoefficient::from_f64(v)
    }

    /// A valid `(c0, q0)` with `P(|xi| < c0) <= q0`, preferring the law's
    /// exact pair. Laws with known support or CDF always carry one, so the
    /// conservative fallback `(c0, q0) = (sigma/3, sqrt(1 - 1/9))` from the
    /// unit-variance argument is only a last resort.
    pub fn derive_small_ball_pair(&self) -> (f64, f64) {
        self.small_ball_pair.unwrap_or((1.0 / 3.0, (1.0 - 1.0 / 9.0f64).sqrt()))
    }

    /// Reference tail slope `log(1/q0)` when the law has an atom at zero.
    pub fn atom_tail_slope(&self) -> Option<f64> {
        match self.kind {
            LawKind::ThreePoint { q0, .. } => Some((1.0 / q0).ln()),
            _ => None,
        }
    }

    /// Mass at exactly zero.
    pub fn mass_at_zero(&self) -> f64 {
        match self.kind {
            LawKind::ThreePoint { q0, .. } => q0,
            _ => 0.0,
        }
    }

    /// Finite support with probabilities, when the law is discrete.
    pub fn support(&self) -> Option<Vec<(f64, f64)>> {
        match self.kind {
            LawKind::Rademacher => Some(vec![(-1.0, 0.5), (1.0, 0.5)]),
            LawKind::ThreePoint { q0, atom } => Some(vec![
                (-atom, (1.0 - q0) / 2.0),
                (0.0, q0),
                (atom, (1.0 - q0) / 2.0),
            ]),
            _ => None,
        }
    }
}
