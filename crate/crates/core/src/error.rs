use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate lattice: Gram determinant is zero")]
    DegenerateLattice,

    #[error("malformed Gram matrix: {0}")]
    MalformedGram(String),

    #[error("lattice is not positive definite")]
    NotPositiveDefinite,

    #[error("discriminant {order} exceeds the coset enumeration bound {bound}")]
    DiscriminantTooLarge { order: String, bound: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(i64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("point is not in the upper half space: {0}")]
    NotInUpperHalfSpace(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("malformed polarization: {0}")]
    Polarization(String),

    #[error("non-invertible action: {0}")]
    NonInvertible(String),

    #[error("{p} does not divide {n}")]
    PrimeDoesNotDivide { p: u64, n: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("zero argument: {0}")]
    Zero(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
