use alloc::string::String;

/// Failures raised by the computations. Variants map onto the CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("structural mismatch: {0}")]
    Structure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("block splitting failed: {0}")]
    Split(&'static str),
    #[error("check falsified: {0}")]
    Falsified(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("registry lacks label {0}")]
    MissingLabel(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
