use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty search specification: {0}")]
    EmptySearch(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("rejection sampler acceptance {acceptance:.3e} below 1e-4")]
    LowAcceptance { acceptance: f64 },

    #[error("density vanishes at the target boundary (T(x) = {value})")]
    TargetBoundary { value: f64 },

    #[error("shooting bracket failure: f(0) in [{lo}, {hi}] gives zero at [{t_lo}, {t_hi}], target {target}")]
    Bracket {
        lo: f64,
        hi: f64,
        t_lo: f64,
        t_hi: f64,
        target: f64,
    },

    #[error("did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("body is unbounded in direction {0:?}")]
    Unbounded(Vec<f64>),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
