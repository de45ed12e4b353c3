use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime (or exceeds 2^31)")]
    NotPrime(u64),
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("the defining ideal contains 1 (zero ring)")]
    UnitIdeal,
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("colon by the zero element")]
    ZeroDivisorQuery,
    #[error("resource bound exceeded: Groebner basis grew past {0} elements")]
    ResourceBound(usize),
    #[error("exponent overflow while raising to a Frobenius power")]
    Overflow,
    #[error("module has infinite length")]
    InfiniteLength,
    #[error("operation requires a one-dimensional ring, ring has dimension {0}")]
    WrongDimension(i64),
    #[error("ideal is not primary to the irrelevant ideal")]
    NotPrimary,
    #[error("additivity requested without local multiplicities")]
    MissingMultiplicities,
    #[error("not a monomial: {0}")]
    NotMonomial(String),
    #[error("no parameter found after {0} attempts; retry with a larger field or another seed")]
    NoParameterFound(usize),
    #[error("internal invariant violated: image column does not lift through the kernel")]
    LiftFailure,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
