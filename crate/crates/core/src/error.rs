use std::fmt;

use crate::googlerank::RankVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error(
        "{kind} did not converge after {iterations} iterations (residual {residual:e})",
        kind = .last.kind,
        iterations = .last.iterations,
        residual = .last.residual
    )]
    NotConverged { last: Box<RankVector> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Io,
    Parse,
    Convergence,
    Contract,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Io => 1,
            ErrorClass::Parse => 2,
            ErrorClass::Convergence => 3,
            ErrorClass::Contract => 4,
        }
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorClass::Io => "io",
            ErrorClass::Parse => "parse",
            ErrorClass::Convergence => "convergence",
            ErrorClass::Contract => "contract",
        };
        f.write_str(s)
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::EmptyInput(_) => ErrorClass::Parse,
            Error::Contract(_) => ErrorClass::Contract,
            Error::NotConverged { .. } => ErrorClass::Convergence,
            Error::Io(_) => ErrorClass::Io,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }
}
