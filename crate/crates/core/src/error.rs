use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial has degree zero in variable {0}")]
    ZeroVariableDegree(usize),
    #[error("degree {degree} is not below the Kronecker base {base}")]
    KroneckerDegree { degree: u32, base: String },
    #[error("exponent does not fit the machine exponent type")]
    ExponentOverflow,
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: String,
        limit: String,
    },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("characteristic {characteristic} does not exceed {bound}")]
    CharacteristicGate { characteristic: u64, bound: String },
    #[error("search exhausted after {0} candidates")]
    Exhausted(u64),
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: impl ToString, limit: impl ToString) -> Self {
        Error::Budget {
            what,
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
