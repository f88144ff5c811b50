use thiserror::Error;

/// Errors raised by matrix primitives, family validation, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("density operator trace is {trace:.12}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("Kraus set is not trace preserving (residual norm {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("Choi operator is not trace preserving (residual norm {residual:.3e})")]
    ChoiNotTracePreserving { residual: f64 },

    #[error("derivative {index} violates {what} (residual {residual:.3e})")]
    InvalidDerivative {
        index: usize,
        what: &'static str,
        residual: f64,
    },

    #[error("parameter out of range: {0}")]
    InvalidParam(String),

    #[error("quantity is infinite: {0}")]
    Infinite(&'static str),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
