use thiserror::Error;

use crate::io::ParseError;

/// Failure categories shared by every module of the crate.
///
/// The CLI maps these onto process exit codes, so the split between
/// `Hypothesis` (the instance does not satisfy a theorem's assumptions) and
/// everything else is load-bearing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex `{0}` is not on the designated face")]
    NotOnFace(String),

    #[error("instance has {vertices} vertices, above the enumeration cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error("resource limit exceeded: {0}")]
    Budget(String),

    #[error("malformed superposition: {0}")]
    Malformed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// True for errors meaning "this instance is outside the theorem's scope"
    /// rather than "something is wrong with the computation".
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(self, Error::Hypothesis(_) | Error::NotOnFace(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
