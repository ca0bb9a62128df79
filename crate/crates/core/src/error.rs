use thiserror::Error;

/// Errors produced by the library, grouped by how callers should react.
///
/// `Domain` marks invalid inputs, `Capability` marks requests the library
/// refuses on purpose (documented bounds, unsupported model shapes), and
/// `NotAttained` marks searches that hit their scan cap.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capability error: {0}")]
    Capability(String),

    #[error("{what} not attained for any odd committee size up to {cap}")]
    NotAttained { what: String, cap: u32 },

    #[error("invalid rule spec: {0}")]
    RuleSpec(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
