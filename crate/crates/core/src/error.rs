use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("semiaxis {index} is {value}; semiaxes must be positive and finite")]
    NonPositiveSemiaxis { index: usize, value: f64 },

    #[error("eigenvalue {index} is {value}; eigenvalues must be positive and finite")]
    NonPositiveEigenvalue { index: usize, value: f64 },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite input")]
    NonFinite,

    #[error("{name} = {value} is out of range {min}..={max}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("at least {min} samples are required, got {found}")]
    TooFewSamples { min: u64, found: u64 },

    #[error("covariance matrix is not symmetric positive definite")]
    NotPositiveDefinite,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn check_range(name: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn check_samples(n: u64) -> Result<()> {
    if n < 2 {
        Err(Error::TooFewSamples { min: 2, found: n })
    } else {
        Ok(())
    }
}
