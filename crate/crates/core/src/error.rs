use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse failure: {0}")]
    Parse(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for `Error::InvalidArgument` with formatted text.
#[macro_export]
macro_rules! invalid_arg {
    ($($t:tt)*) => {
        $crate::error::Error::InvalidArgument(format!($($t)*))
    };
}
