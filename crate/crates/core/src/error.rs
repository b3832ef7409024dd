use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    /// A table valuation was asked for a bundle it does not list.
    #[error("table valuation has no entry for bundle {0:?}")]
    UnlistedBundle(Vec<usize>),

    #[error("mms profile does not belong to this instance: {0}")]
    ProfileMismatch(String),

    /// Signals a bug rather than bad input.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 3,
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}
