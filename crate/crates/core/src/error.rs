use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not a divisor: {0}")]
    NotADivisor(String),
    #[error("operation undefined for the zero element")]
    ZeroElement,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(
        "mixed classification for q = {q}: {normal} normal, {one_normal} 1-normal, {other} other"
    )]
    MixedClassification {
        q: u64,
        normal: u64,
        one_normal: u64,
        other: u64,
    },
    #[error("fixture unavailable: {0}")]
    Fixture(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
