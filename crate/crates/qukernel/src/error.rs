use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different cyclotomic fields ({0} vs {1})")]
    MixedOrder(u64, u64),
    #[error("invalid rank {rank} for type {lie_type}")]
    InvalidRank { lie_type: String, rank: usize },
    #[error("unknown Lie type {0}")]
    UnknownType(String),
    #[error("grid order must be at least 2, got {0}")]
    GridTooSmall(u64),
    #[error("gaussian factorial vanishes at factor {0}")]
    VanishingFactor(u64),
    #[error("lifts disagree at {0}")]
    Descent(String),
    #[error("result leaves the subalgebra at {0}")]
    NotInSubalgebra(String),
    #[error("degree cap {0} exceeded")]
    DegreeCap(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
