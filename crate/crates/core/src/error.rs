use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sensor {sensor} has no optical readout at ω = {omega} rad/s (|C| = 0)")]
    NoOpticalReadout { sensor: usize, omega: f64 },

    #[error("dividing weights are not normalized: Σ|w|² = {norm_sq}")]
    UnnormalizedWeights { norm_sq: f64 },

    #[error("array configuration is invalid: {0}")]
    InvalidArray(String),

    #[error("operation requires identical sensors: {0}")]
    HeterogeneousArray(String),

    #[error("frequency grid rejected: {0}")]
    GridRejected(String),

    #[error("noise PSD must be positive, got {value} at ω = {omega} rad/s")]
    NonPositiveNoise { omega: f64, value: f64 },

    #[error(
        "quadrature did not converge: estimate {estimate}, error {error} > tolerance {tolerance} after {intervals} intervals"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("unknown {kind} strategy `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("missing strategy parameter `{0}`")]
    MissingStrategyParam(&'static str),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors that come from numerical non-convergence rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
