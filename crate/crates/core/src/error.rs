use thiserror::Error;

/// Errors raised by lattice constructions, verifiers and oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two objects live in lattices of different ground-set sizes.
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    Dimension { expected: u32, found: u32 },

    /// The request exceeds what this implementation supports (size guards).
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Inputs violate an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A guaranteed structural property failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Malformed chain dump or poset file.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}
