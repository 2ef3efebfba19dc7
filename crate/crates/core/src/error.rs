use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("could not certify the result with {digits} digits of precision")]
    PrecisionExhausted { digits: u32 },
    #[error("continued fraction of depth {depth} does not reach a denominator above {target}")]
    InsufficientConvergents { target: u64, depth: usize },
    #[error("work budget exceeded: {required} evaluations needed, budget is {budget}")]
    WorkBudgetExceeded { required: u128, budget: u128 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid base {0}: bases must be at least 2")]
    InvalidBase(u64),
    #[error("bases {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("negative beta is not supported")]
    NegativeBeta,
    #[error("index overflow: floor(n * beta) or its digit expansion exceeds 64 bits")]
    IndexOverflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid real number: {0}")]
    InvalidReal(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
