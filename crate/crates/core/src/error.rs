use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order alpha must satisfy -1 < alpha <= 40, got {0}")]
    InvalidAlpha(f64),

    #[error("argument outside the domain of {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: |z| = {z} exceeds the supported range (cap {cap})")]
    Range { func: &'static str, z: f64, cap: f64 },

    #[error("zero s_{index} of J_(alpha+1) did not converge: {detail}")]
    ZeroConvergence { index: usize, detail: String },

    #[error("quadrature order {order} is not supported: {detail}")]
    Order { order: usize, detail: String },

    #[error("integrand is not finite at node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },

    #[error("index j = {j} is outside the zero table (|j| <= {max})")]
    IndexOutOfTable { j: i64, max: usize },

    #[error("exponent p must satisfy 1 < p < inf, got {0}")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole at x = y = {0}; the diagonal must be excluded")]
    Diagonal(f64),

    #[error("principal value at x = {x} did not converge (spread {spread:e})")]
    PrincipalValue { x: f64, spread: f64 },

    #[error("weight is not power-like; use the numeric A_p checker instead")]
    NotPowerLike,
}

pub type Result<T> = std::result::Result<T, Error>;
