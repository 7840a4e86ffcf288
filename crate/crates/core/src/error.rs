use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("s = {sigma}+{t}i lies within the pole guard radius of s = 1")]
    PoleAtOne { sigma: f64, t: f64 },

    #[error("requested accuracy {target:e} not reachable (best error bound {achieved:e})")]
    PrecisionUnachievable { target: f64, achieved: f64 },

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sigma = {sigma} is outside the admissible strip (lower edge {edge})")]
    StripViolation { sigma: f64, edge: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("rounding certificate violated: {lhs:e} > {rhs:e}")]
    CertificateViolation { lhs: f64, rhs: f64 },

    #[error("polynomial vanishes at the algebraic parameter")]
    ZeroValue,

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded { what: String, value: f64, cap: f64 },

    #[error("invalid algebraic number: {0}")]
    InvalidAlgebraic(String),

    #[error("quadrature step {step:e} exceeds the resolving step {max:e}")]
    StepTooCoarse { step: f64, max: f64 },

    #[error("contour quadrature unstable: doubling nodes changed coefficients by {diff:e}")]
    QuadratureInconsistency { diff: f64 },

    #[error("no root of the delta equation in the bracket {0}")]
    NoRoot(String),

    #[error("degree d = {d} is not admissible for sigma = {sigma}")]
    InadmissibleDegree { d: u32, sigma: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
