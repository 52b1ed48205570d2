use thiserror::Error;

/// Errors raised by ring construction and the engines built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("reduction polynomial {poly} is reducible over GF({p})")]
    ReduciblePolynomial { p: u32, poly: String },
    #[error("invalid factor descriptor: {0}")]
    InvalidFactor(String),
    #[error("ring order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: u64, cap: u64 },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element set is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("ideal is not prime")]
    NotPrimeIdeal,
    #[error("map is not a ring automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid weight descriptor: {0}")]
    InvalidPsi(String),
    #[error("search cap exceeded; best lower bound {best}")]
    SearchIncomplete { best: usize },
    #[error("internal contradiction: {0}")]
    Contradiction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
