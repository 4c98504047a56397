use thiserror::Error;

/// Errors surfaced by the exact and floating-point engines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Arguments outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A factorial was requested beyond the capacity of the shared table.
    #[error("factorial table holds up to {limit}!, but {needed}! was requested")]
    Capacity { needed: u64, limit: u64 },

    /// The floating-point engine could not certify the requested accuracy.
    #[error("could not certify absolute error {target:.3e}; best bound was {achieved:.3e}")]
    Precision { target: f64, achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
