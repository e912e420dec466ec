use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants mirror the exit-code classes of the command-line front end:
/// usage/domain problems, resource caps, and malformed input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Arguments that are individually well-formed but cannot be combined,
    /// e.g. edges over different universes.
    #[error("usage error: {0}")]
    Usage(String),

    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The request exceeds a documented resource cap.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// Hypergraph text could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain { op, reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
