//! Laboratory for the real roots of Kac random polynomials.
//!
//! The crate has three layers:
//!
//! - sampling and exact representation of random polynomials with iid
//!   coefficients ([`laws`], [`poly`]),
//! - certified real-root counting over rational intervals, with an exact
//!   Sturm oracle and a faster subdivision counter ([`roots`]),
//! - closed-form bound curves and reproducible Monte Carlo experiments
//!   that compare empirical root statistics against them ([`bounds`],
//!   [`experiments`]).
//!
//! Everything downstream of a master seed is deterministic: per-trial
//! streams are derived in counter mode, so a run is reproducible
//! byte-for-byte regardless of worker count.

pub mod ball;
pub mod bounds;
pub mod dyadic;
pub mod error;
pub mod experiments;
pub mod interval;
pub mod laws;
pub mod poly;
pub mod records;
pub mod rng;
pub mod roots;
pub mod stats;

pub use ball::CertifiedValue;
pub use dyadic::DyadicCoefficient;
pub use error::{ConfigError, KaclabError, QuadratureError, RootCountError};
pub use interval::Interval;
pub use laws::CoefficientLaw;
pub use poly::PolynomialSample;
pub use records::{ExperimentSummary, TrialRecord};
pub use roots::{CountMethod, RootCountResult};
