use thiserror::Error;

/// Errors produced by the arithmetic, expansion and correlation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument must be positive, got 0 ({0})")]
    ZeroArgument(&'static str),

    #[error("{what} overflows 128-bit arithmetic")]
    Overflow { what: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("tolerance violated in {context}: deviation {deviation:e} exceeds {tolerance:e}")]
    Tolerance {
        context: String,
        deviation: f64,
        tolerance: f64,
    },

    #[error("inexact division: {numerator} is not divisible by {denominator}")]
    InexactDivision { numerator: i128, denominator: i128 },

    #[error("evaluation failed at n = {n}: {reason}")]
    Evaluation { n: u64, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroArgument(_) => "zero_argument",
            Error::Overflow { .. } => "overflow",
            Error::Domain(_) => "domain",
            Error::Tolerance { .. } => "tolerance",
            Error::InexactDivision { .. } => "inexact_division",
            Error::Evaluation { .. } => "evaluation",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn overflow(what: impl Into<String>) -> Self {
        Error::Overflow { what: what.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
