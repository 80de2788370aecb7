use thiserror::Error;

/// Errors raised by field, polynomial, group and engine operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field cardinality exceeds the 2^40 cap")]
    CardinalityOverflow,

    #[error("operands live in different fields ({left} vs {right})")]
    ContextMismatch { left: String, right: String },

    #[error("{target} is not an extension of {source_field}")]
    NotInTower { source_field: String, target: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("squareness is undefined in characteristic 2")]
    CharacteristicTwo,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial is constant")]
    ConstantPolynomial,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("q-degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("modulus is not irreducible over its base")]
    ReducibleModulus,

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("zero vector has no stabilizer orbit")]
    ZeroVector,

    #[error("no usable specialization: {0}")]
    NoSamples(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
