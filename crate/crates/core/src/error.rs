use thiserror::Error;

/// Errors reported by the library.
///
/// The three variants mirror how callers are expected to react:
/// `Structure` means the input data itself is malformed (wrong dimensions,
/// out-of-range entries, unparseable notation), `Domain` means a well-formed
/// value does not satisfy an operation's precondition (e.g. a non-bijective
/// map where a permutation is required, a violated system condition), and
/// `Resource` means an enumeration cap was hit and an explicit override is
/// needed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    pub fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
