use thiserror::Error;

/// Errors raised by the library. Every variant describes an input the caller
/// can fix; internal invariant violations panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a squarefree integer greater than 1")]
    NotSquarefree(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("polynomial must be monic of positive degree")]
    NotMonic,

    #[error("inconsistent prime data: {0}")]
    InconsistentPrime(String),

    #[error("field condition violated: {0}")]
    FieldCondition(String),

    #[error("unsupported root-of-unity order {0}")]
    UnsupportedRootOrder(u32),

    #[error("splitting undecided: {0}")]
    Undecided(String),

    #[error("invalid quaternion algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid level prime: {0}")]
    InvalidLevel(String),

    #[error("invalid quartic field: {0}")]
    InvalidQuartic(String),

    #[error("Dedekind criterion inapplicable: {0} divides the polynomial index")]
    DedekindInapplicable(u64),

    #[error("geometry bound violated: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
