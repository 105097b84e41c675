use thiserror::Error;

/// Errors raised by the counting, closed-form and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("part sequence must be nonempty")]
    EmptyParts,
    #[error("parts must be positive integers, got {0}")]
    NonPositivePart(u64),
    #[error("modulus d must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("characteristic must be a prime, got {0}")]
    NotPrime(u64),
    #[error("closed form requires at least {required} parts, got {got}")]
    TooFewParts { required: usize, got: usize },
    #[error("parts must be strictly increasing, got {0:?}")]
    NotStrictlyIncreasing(Vec<u64>),
    #[error("argument out of domain: {0}")]
    Domain(String),
    /// A final division that must be exact left a remainder. Indicates a
    /// transcription bug in a formula and must never fire.
    #[error("inexact division in {context}: {numerator} / {denominator}")]
    Inexact {
        context: &'static str,
        numerator: String,
        denominator: String,
    },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("invalid sweep configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
