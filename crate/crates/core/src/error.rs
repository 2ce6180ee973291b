use std::io;

use thiserror::Error;

pub type Result<T, E = CeosError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CeosError {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("capacity error: {what} needs {count}, limit is {limit}")]
    Capacity {
        what: String,
        count: u128,
        limit: u128,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CeosError {
    pub fn param(msg: impl Into<String>) -> Self {
        CeosError::Parameter(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        CeosError::Format(msg.into())
    }

    /// Prefix the message with some context while keeping the variant.
    pub fn context(self, ctx: impl AsRef<str>) -> Self {
        let ctx = ctx.as_ref();
        match self {
            CeosError::Parameter(m) => CeosError::Parameter(format!("{ctx}: {m}")),
            CeosError::Format(m) => CeosError::Format(format!("{ctx}: {m}")),
            CeosError::Capacity { what, count, limit } => CeosError::Capacity {
                what: format!("{ctx}: {what}"),
                count,
                limit,
            },
            CeosError::Internal(m) => CeosError::Internal(format!("{ctx}: {m}")),
            CeosError::Io(e) => CeosError::Io(io::Error::new(e.kind(), format!("{ctx}: {e}"))),
        }
    }
}

impl From<serde_json::Error> for CeosError {
    fn from(e: serde_json::Error) -> Self {
        CeosError::Format(e.to_string())
    }
}

impl From<csv::Error> for CeosError {
    fn from(e: csv::Error) -> Self {
        CeosError::Format(e.to_string())
    }
}
