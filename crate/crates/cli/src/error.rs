use std::fmt;

use zeitlin_oracle::OracleError;

/// Failure carrying the process exit code: 2 for usage errors, 3 for
/// precision or capacity problems, 1 for a mathematical violation that
/// surfaced as an error rather than a report.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<zeitlin_core::Error> for CliError {
    fn from(e: zeitlin_core::Error) -> Self {
        let code = match e {
            zeitlin_core::Error::Domain(_) => 2,
            zeitlin_core::Error::Capacity { .. } | zeitlin_core::Error::Precision { .. } => 3,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Domain(_) | OracleError::Capacity { .. } => {
                CliError { code: 2, message: e.to_string() }
            }
            OracleError::Spectral(_) => CliError { code: 3, message: e.to_string() },
            OracleError::BlockEinstein(_) | OracleError::Inconsistency(_) => {
                CliError { code: 1, message: e.to_string() }
            }
            OracleError::Exact(inner) => inner.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::internal(e.to_string())
    }
}
