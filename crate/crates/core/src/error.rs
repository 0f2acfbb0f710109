use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid degree {0}: degrees must be at least 3")]
    InvalidDegree(usize),
    #[error("vertex-transitive groups need d0 == d1 (got {d0}, {d1})")]
    UnequalDegrees { d0: usize, d1: usize },
    #[error("address {0:?} is not a vertex of the ball")]
    AddressOutsideBall(String),
    #[error("malformed address {0:?}")]
    MalformedAddress(String),
    #[error("radius too small: {0}")]
    InsufficientRadius(String),
    #[error("enumeration would produce {predicted} elements, cap is {cap}")]
    CapExceeded { predicted: String, cap: u64 },
    #[error("family does not match group kind: {0}")]
    KindMismatch(String),
    #[error("parameter outside its domain: {0}")]
    OutOfDomain(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("vertex {0} is not interior to the ball")]
    NotInterior(String),
    #[error("malformed variant: {0}")]
    MalformedVariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("group too large: {0}")]
    GroupTooLarge(String),
}
