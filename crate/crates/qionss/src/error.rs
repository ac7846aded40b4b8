use num_complex::Complex64;

/// Errors reported by model construction and evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("mismatched canonical basis: hbar = {left} vs hbar = {right}")]
    BasisMismatch { left: f64, right: f64 },

    #[error(
        "mode amplitudes mix propagation directions; evaluate each direction separately and add"
    )]
    MixedDirections,

    #[error("coupling ratio Cc/C = {ratio:.3e} exceeds 0.1; the weak-coupling model is invalid")]
    CouplingTooStrong { ratio: f64 },

    #[error("undamped, no steady state")]
    NoSteadyState,

    #[error("transfer function evaluated at a pole: s = {s}")]
    PoleEvaluation { s: Complex64 },

    #[error("state-space dimensions are inconsistent: {0}")]
    DimensionMismatch(String),

    #[error("operation supports single-port models only, got {states} state(s), {ports} port(s)")]
    NotSinglePort { states: usize, ports: usize },

    #[error("denominator polynomial is identically zero")]
    ZeroDenominator,

    #[error("numerator degree {num} exceeds denominator degree {den}")]
    ImproperRational { num: usize, den: usize },

    #[error("root extraction is implemented for polynomial degree <= 1, got degree {0}")]
    UnsupportedDegree(usize),

    #[error("time step too coarse for the RK4 integrator: dt*|A| = {0:.3e} >= 0.1")]
    UnstableStep(f64),

    #[error("trajectory ensemble needs at least one trajectory")]
    EmptyEnsemble,

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("time grid needs dt > 0 and at least one point")]
    InvalidGrid,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Negative { name, value })
    }
}
