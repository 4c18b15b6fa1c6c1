//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or quadrature scheme failed to meet its tolerance.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// An evaluation point collides with an integration contour or a pole.
    #[error("contour collision: {0}")]
    Collision(String),

    /// A dense factorization produced an exact zero pivot.
    #[error("singular factorization: {0}")]
    Singular(String),

    /// Non-finite values or other numerical failure during evaluation.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 2 for bad arguments, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            _ => 3,
        }
    }
}
