use alloc::{boxed::Box, string::String};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("eigensolver did not converge after {iterations} iterations (off-diagonal residual {residual:e})")]
    EigenNoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("support violation: reference eigenvalue {eigenvalue:e} carries weight {weight:e} (is the channel smoothed?)")]
    SupportViolation { eigenvalue: f64, weight: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Kraus operators are not trace preserving (‖Σ K†K − I‖_F = {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("vectors are not orthonormal (Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("{operation} is not supported for classical-quantum channels")]
    UnsupportedForCq { operation: &'static str },

    #[error("direction is not a descent direction (slope {slope:e})")]
    NotDescentDirection { slope: f64 },

    #[error("line search found no acceptable step after {backtracks} backtracks")]
    BacktrackExhausted { backtracks: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("all {restarts} restarts failed; first error: {first}")]
    AllRestartsFailed { restarts: usize, first: Box<Error> },
}
