use thiserror::Error;

/// Invalid law or experiment configuration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown law specification `{0}`")]
    UnknownLaw(String),
    #[error("law parameter out of range: {0}")]
    LawParameter(String),
    #[error("invalid configuration value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("unknown experiment name `{0}`")]
    UnknownExperiment(String),
    #[error("malformed configuration line {line}: {text}")]
    Malformed { line: usize, text: String },
}

/// Root counting failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootCountError {
    /// The zero polynomial has no well-defined root count.
    #[error("root count of the zero polynomial is undefined")]
    ZeroPolynomial,
    /// Subdivision budget exhausted with boxes still undecided.
    #[error("subdivision budget exhausted with {undecided} undecided boxes ({escalations} escalations used)")]
    Unresolved { undecided: usize, escalations: usize },
    #[error("invalid interval: {0}")]
    BadInterval(String),
}

/// Adaptive quadrature could not reach the requested tolerance.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
pub struct QuadratureError {
    pub requested: f64,
    pub achieved: f64,
}

/// Umbrella error for experiment runs.
#[derive(Debug, Error)]
pub enum KaclabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    RootCount(#[from] RootCountError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Records(String),
}
