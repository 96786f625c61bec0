use thiserror::Error;

/// Errors raised by the exact kernels.
///
/// `MathAssertion` is reserved for checks that are mathematically guaranteed
/// to pass when the implementation is correct (integrality of produced
/// generators, solver consistency, congruences). Seeing one at runtime means
/// a formula or convention bug, not bad user input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field description: {0}")]
    InvalidField(String),

    #[error("polynomial {0} is reducible modulo {1}")]
    Reducible(String, u64),

    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("element has negative valuation; residue undefined")]
    NegativeValuation,

    #[error("no {order}-th root of the requested element exists")]
    NoRoot { order: u64 },

    #[error("unsupported embedding: {0}")]
    UnsupportedEmbedding(String),

    #[error("mixed variable families or ring tags: {0}")]
    MixedVariables(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("zero polynomial has no leading monomial")]
    ZeroPolynomial,

    #[error("series is not strict: {0}")]
    NotStrict(String),

    #[error("law is not typical for q = {0}")]
    NotTypical(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("wild ramification (p divides e) is not supported here")]
    WildRamification,

    #[error("mathematical assertion failed: {0}")]
    MathAssertion(String),

    #[error("exact value too large to materialize: {0}")]
    SizeLimit(String),

    #[error("division by zero or non-invertible element")]
    NotInvertible,

    #[error("serialization: {0}")]
    Serialization(String),
}
