//! Error taxonomy shared by every operation.
//!
//! Usage errors are malformed inputs (shape mismatches, unknown names,
//! out-of-range indices). Domain errors are well-formed inputs that violate
//! a mathematical precondition; the message names the violated property.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong shape, bad index, unparsable field.
    #[error("usage error: {0}")]
    Usage(String),
    /// Well-formed input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}
