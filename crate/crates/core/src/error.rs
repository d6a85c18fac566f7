use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A precondition on an operation's arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative solver ran out of iterations. Carries the residual
    /// history so failed runs stay analyzable.
    #[error("solver failed to converge within {max_iter} iterations (last residual {last_residual:.3e})")]
    SolverFailure {
        max_iter: usize,
        last_residual: f64,
        residual_history: Vec<f64>,
    },

    /// A field stopped being finite during time integration.
    #[error("numerical blow-up at t = {t}: {reason}")]
    NumericalBlowup { t: f64, reason: String },

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature accuracy not reached (value {value:.6e}, error estimate {error:.3e})")]
    QuadratureAccuracy { value: f64, error: f64 },

    /// Any other numerical failure.
    #[error("{0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidArgument(msg.into())
    }
}
