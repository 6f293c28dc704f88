use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// The CLI maps these onto its exit codes: parse errors exit with 2,
/// precondition and arithmetic errors with 3, internal invariant
/// violations with 4.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a complex: composite of differentials is nonzero at ({row}, {col})")]
    NotAComplex { row: usize, col: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl CoreError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        CoreError::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CoreError::InternalInvariant(msg.into())
    }
}
