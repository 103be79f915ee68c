use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("conductor {conductor} is not divisible by {required}")]
    ConductorNotDivisible { conductor: u32, required: u32 },
    #[error("expected {expected} coefficients for conductor {conductor}, found {found}")]
    CoefficientLength {
        conductor: u32,
        expected: usize,
        found: usize,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of {value} does not lie in Q(zeta_{conductor})")]
    NoSquareRoot { value: String, conductor: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("keep set must be nonempty")]
    EmptyKeep,
    #[error("local dimension {0} is not prime")]
    NotPrime(u32),
    #[error("closure exceeded cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("operator does not preserve the code subspace (basis vector {0})")]
    NotInvariant(usize),
    #[error("reduction has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
