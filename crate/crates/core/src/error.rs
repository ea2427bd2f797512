use thiserror::Error;

/// Errors raised by the arithmetic, expansion and reporting layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("radicand {0} must be a positive non-square integer")]
    InvalidRadicand(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{d} is not a quadratic residue modulo {p}")]
    NotAResidue { d: u64, p: u64 },

    #[error("{p} divides the radicand {d} (ramified prime)")]
    RamifiedPrime { d: u64, p: u64 },

    #[error("branch digit {digit} is not a square root of {d} modulo {p}")]
    InvalidBranch { digit: u64, d: u64, p: u64 },

    #[error("p-adic precision {requested} exceeds the cap of {cap} digits")]
    PrecisionCapExceeded { requested: u64, cap: u64 },

    #[error("sign of zero requested in Browkin II odd step at index {index}")]
    SignOfZero { index: usize },

    #[error("complete-quotient map exceeded {cap} entries")]
    MemoryBudgetExceeded { cap: usize },

    #[error("zero convergent denominator at index {index}")]
    ZeroDenominator { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CfError>;
