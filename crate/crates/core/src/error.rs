use crate::exactfield::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("braiding entry {0} must be nonzero")]
    ZeroBraidingEntry(&'static str),
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("{0} is not a Lyndon word")]
    NotLyndon(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("solvability condition fails (weighted sum is {0})")]
    SolvabilityViolated(String),
    #[error("{n} is not in J2 with witness {j_n}")]
    NotInJ2 { n: usize, j_n: usize },
    #[error("m = {0} has no row in the non-root table")]
    UnsupportedM(usize),
    #[error("internal error: inexact division computing Q2 for k = {k}, m = {m}")]
    InternalInexactDivision { k: usize, m: usize },
    #[error("total degree {0} exceeds the ceiling of {max}", max = crate::oracle::DEGREE_CEILING)]
    DegreeCeiling(usize),
    #[error("element does not lie in U_{m}")]
    NotInUm { m: usize },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
