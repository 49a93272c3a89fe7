use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point has {found} coordinates but the chart has dimension {expected}")]
    Arity { expected: usize, found: usize },

    #[error("point representation does not match the carrier set: {0}")]
    Representation(String),

    #[error("discrete point {id} is outside a carrier set of {count} points")]
    OutOfCarrier { id: usize, count: usize },

    #[error("indefinite value where a square root is required: {0}")]
    Indefinite(String),

    #[error("degenerate basis: |Gram determinant| = {0:e}")]
    DegenerateBasis(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("singular metric at {0:?}")]
    SingularMetric(Vec<f64>),

    #[error("path left the chart at {0:?}")]
    ChartExit(Vec<f64>),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for numerical failures (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::SingularMetric(_) | Error::ChartExit(_) | Error::NoConvergence(_) | Error::Indefinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
