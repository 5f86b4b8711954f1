use thiserror::Error;

/// Errors raised by the grid, solver and certificate operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resolution insufficient: {0}")]
    ResolutionInsufficient(String),
    #[error("window touches the grid boundary: {0}")]
    BoundaryContact(String),
    #[error("infeasible obstacle problem: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn invalid(msg: impl Into<String>) -> LabError {
    LabError::InvalidArgument(msg.into())
}
