use thiserror::Error;

/// Errors raised by the library layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate sample: standard deviation is zero")]
    DegenerateSample,

    #[error("degenerate criterion: {0}")]
    DegenerateCriterion(String),

    #[error("degenerate objective: {0}")]
    DegenerateObjective(String),

    #[error("objective error: {0}")]
    Objective(String),

    #[error("covariance error: {0}")]
    Covariance(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("Berry-Esseen constant {0} outside [(2*pi)^-1/2, 0.4748]")]
    Constant(f64),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown registry entry: {0}")]
    UnknownName(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("ingestion error: {0}")]
    Ingestion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
