use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus e={0}: need e >= 2")]
    InvalidModulus(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient charge: charge {charge} is smaller than the length {length}")]
    InsufficientCharge { charge: i64, length: usize },

    #[error("invalid k: charge {charge} plus k={k} is negative")]
    InvalidK { charge: i64, k: i64 },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("incomparable input: {0}")]
    IncomparableInput(String),

    #[error("incompatible k: {0}")]
    IncompatibleK(String),

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("out of basis: {0} is not e-multiregular")]
    OutOfBasis(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// The inserted runners do not share a common label.
    #[error("k violates the common-runner congruence: {0}")]
    Violates51(String),

    /// The length chain on the entries of k fails.
    #[error("k violates the length chain: {0}")]
    Violates52(String),

    #[error("precondition failure: {0}")]
    PreconditionFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}
