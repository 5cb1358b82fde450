use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by evaluators, estimators and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the supported domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The unscaled value is not representable. The true value is
    /// `scaled * exp(log_factor)`.
    #[error("overflow: value is {scaled} * exp({log_factor})")]
    Overflow {
        scaled: Complex64,
        log_factor: Complex64,
    },

    /// The backing evaluator reported a failure other than overflow.
    #[error("evaluation failed at z = {z}: {reason}")]
    Evaluation { z: Complex64, reason: String },

    /// A coefficient A(z) of the normal form vanishes.
    #[error("turning point at z = {0}")]
    TurningPoint(Complex64),

    /// An iteration map is undefined at this point.
    #[error("singular point of the iteration map at z = {0}")]
    Singular(Complex64),

    /// A point lies on the boundary of an admissible set (e.g. an ASL sector).
    #[error("divergence: {0}")]
    Divergence(String),

    /// Argument principle could not resolve the winding number.
    #[error("zero counting failed: {0}")]
    Counting(String),
}

pub type Result<T> = std::result::Result<T, Error>;
