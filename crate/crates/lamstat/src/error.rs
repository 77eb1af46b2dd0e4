//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the exact pipelines and the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported cyclotomic order {0}: the order must be a prime at most 7")]
    UnsupportedEll(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("degree {degree} exceeds the truncation degree {trunc}")]
    DegreeOverflow { degree: usize, trunc: usize },
    #[error("truncation mismatch: {0} versus {1}")]
    TruncationMismatch(usize, usize),
    #[error("constant term must be zero")]
    NonzeroConstantTerm,
    #[error("constant term must be one")]
    ConstantTermNotOne,
    #[error("the coefficient ring is not a Q-algebra")]
    NotQAlgebra,
    #[error("Witt vector of length {have} is too short: length {need} is required")]
    WittTooShort { have: usize, need: usize },
    #[error("no value supplied for orbit {0}")]
    MissingOrbit(usize),
    #[error("empty level set in ghost component {0}")]
    EmptyLevelSet(usize),
    #[error("input is singular")]
    Singular,
    #[error("polynomial is divisible by an {0}-th power")]
    NotPowerFree(u32),
    #[error("empty family: {0}")]
    EmptyFamily(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
