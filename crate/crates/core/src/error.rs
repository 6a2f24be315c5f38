use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    ZeroDivisor,

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("degree mismatch: deg f = {0}, deg g = {1}")]
    DegreeMismatch(usize, usize),

    #[error("modulus mismatch in modular polynomial arithmetic")]
    ModulusMismatch,

    #[error("polynomial gcd requires a prime modulus")]
    CompositeModulusGcd,

    #[error("{0} is not a good prime here (repeated factors mod p)")]
    BadPrime(u64),

    #[error("Hensel lifting met non-coprime factors mod {0}; bad prime slipped through")]
    BadPrimeLeak(u64),

    #[error("root lifting requires distinct linear factors mod p")]
    RepeatedRoots,

    #[error("power sums require a monic polynomial")]
    NonMonic,

    #[error("matrix rows are linearly dependent")]
    DependentRows,

    #[error("characteristic polynomial of r(alpha) is not squarefree; r generates a proper subfield")]
    NotSquarefree,

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("p-adic precision doubled {0} times without deciding; giving up")]
    PrecisionCapExceeded(u32),

    #[error("no usable prime found below the configured search cap")]
    PrimeSearchExhausted,

    #[error("deadline exceeded")]
    Timeout,
}

pub type Result<T> = std::result::Result<T, Error>;
