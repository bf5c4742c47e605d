use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the engine.
///
/// `Config` errors are problems with the input description (exit code 2 in
/// the CLI); everything else is a computation error (exit code 1).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("invalid ring presentation: {0}")]
    Ring(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("non-invertible class")]
    NonInvertible,
    #[error("invalid component presentation: {0}")]
    InvalidComponent(String),
    #[error("unstable moduli problem: n = {n} with zero class")]
    Unstable { n: usize },
    #[error("missing wall data: {0}")]
    MissingWallData(String),
    #[error("missing fixed-class datum for edge {0}")]
    MissingFixedClass(String),
    #[error("vertex GW data required: {0}")]
    MissingCorrelator(String),
    #[error("t-dependent total: {0}")]
    TDependent(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Ring(_) | Error::InvalidComponent(_)
        )
    }
}
