use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Grid, shape or configuration mismatch.
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation was called outside its domain of definition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Physical parameters outside the admissible set (mu > 0, n*lambda + 2*mu > 0, ...).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Pointwise nonpositive input to a positive-only law.
    #[error("domain error: {0}")]
    Domain(String),
    /// State left the admissible set (density floor, positivity).
    #[error("state error: {0}")]
    State(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
