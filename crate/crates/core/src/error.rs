use thiserror::Error;

/// Errors surfaced by the library.
///
/// Most arithmetic here is total; the variants below are the handful of
/// contractually failable operations. `SingularMatrix` in particular is a
/// control-flow signal: the Monte Carlo solver catches it and retries with
/// fresh randomness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("CRT moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("extension degree must be even")]
    OddExtensionDegree,
    #[error("element does not lie in the quadratic subfield")]
    NotInQuadraticSubfield,
    #[error("rank-two module requires delta != 0")]
    ZeroDelta,
    #[error("skew polynomial is not the image of a polynomial of degree <= {0}")]
    NotAPhiImage(usize),
    #[error("modulus evaluates to zero at gamma(x)")]
    ModulusHitsCharacteristic,
    #[error("randomized solver gave up after {0} attempts")]
    RetriesExhausted(u32),
    #[error("internal inconsistency: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
