use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid prime {0}")]
    InvalidPrime(i64),

    #[error("{what}: argument {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: i64,
        expected: &'static str,
    },

    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: u32, right: u32 },

    #[error("missing Eisenstein table entry for weight {0}")]
    MissingWeight(u32),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: impl Into<i64>, expected: &'static str) -> Error {
    Error::Domain {
        what,
        value: value.into(),
        expected,
    }
}
