use thiserror::Error;

use crate::exactring::VarId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands disagree on the relations nu*nu1 = nu*nu2 = 0")]
    RelationMismatch,
    #[error("argument of exp/log has a term of t-degree 0 and h-degree 0: {0}")]
    NonNilpotent(String),
    #[error("series is not truncated in a direction it grows in; exp/log would not terminate")]
    Unbounded,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible: nonzero remainder dividing by {divisor}")]
    NotDivisible { divisor: String },
    #[error("cannot invert {0}: assigned value is not a single term")]
    NonMonomialInverse(VarId),
    #[error("term without z in z-replacement: {0}")]
    MissingZ(String),
    #[error("negative exponent of a polynomial variable in {0}")]
    NegativeExponent(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Riemann-Hurwitz balance violated: {0}")]
    Unbalanced(String),
    #[error("sheet count {n} exceeds the oracle limit {limit}")]
    TooManySheets { n: usize, limit: usize },
    #[error("ramification profile {0} does not fit the sheet count")]
    ImpossibleProfile(String),
    #[error("interpolation failed: {0}")]
    Interpolation(String),
    #[error("cache I/O: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
