use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are grouped by the kind of caller mistake (or numerical
/// failure) they represent so front ends can map them onto stable exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid register: {0}")]
    InvalidRegister(String),

    #[error("total dimension overflows usize")]
    DimensionOverflow,

    #[error("invalid site subset: {0}")]
    InvalidSubset(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// Whether the error came from malformed textual input rather than a
    /// well-formed request that is inconsistent with the register.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UnknownState(_) | Error::InvalidParameter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
