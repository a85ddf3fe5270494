use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root solver failed to converge: {0}")]
    Convergence(String),

    /// Initial data violating the standing admissibility assumptions.
    #[error("inadmissible initial data: {0}")]
    Admissibility(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("tridiagonal solve broke down at row {row} (pivot {pivot:e}); check N and dtau")]
    Breakdown { row: usize, pivot: f64 },

    #[error("front collapsed to b = {b:e} at tau = {tau}; the step is unstable")]
    FrontCollapse { tau: f64, b: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Validation(String),
}
