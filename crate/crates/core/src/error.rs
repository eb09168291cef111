use thiserror::Error;

/// Errors raised by evaluation, sampling and estimation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Parameter combination for which the quantity is undefined.
    #[error("invalid parameter for {func}: {detail}")]
    Parameter { func: &'static str, detail: String },

    #[error("index error: |m| = {m} exceeds degree l = {l}")]
    Index { l: usize, m: i64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Point lies where a chart or inverse map is undefined.
    #[error("point excluded from chart: {0}")]
    Excluded(&'static str),

    /// Numerical breakdown during sampling (pivot floor, envelope violation).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("rejection sampler exceeded {0} proposals for a single point")]
    RejectionLimit(usize),

    #[error("at least 2 replicas are required, got {0}")]
    InsufficientReplicas(usize),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn parameter(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Parameter {
        func,
        detail: detail.into(),
    }
}
