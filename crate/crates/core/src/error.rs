use thiserror::Error;

/// Errors raised by ring arithmetic, splitting, lattice enumeration and array design.
#[derive(Debug, Error)]
pub enum Error {
    #[error("D = {0} is not square-free")]
    NotSquareFree(i64),
    #[error("D = {0} is not negative; only imaginary quadratic rings are supported")]
    NotImaginary(i64),
    #[error("D = {0} does not give an imaginary principal ideal domain")]
    NotPid(i64),
    #[error("D = {0} must be a positive square-free integer")]
    NotRealSquareFree(i64),
    #[error("operands belong to different rings (D = {0} and D = {1})")]
    RingMismatch(i64, i64),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a norm-Euclidean ring, D = {0} is not")]
    NonEuclidean(i64),
    #[error("both operands are zero")]
    BothZero,
    #[error("operands are not coprime")]
    NotCoprime,
    #[error("{0} is zero or a unit")]
    ZeroOrUnit(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("{a} is not a quadratic residue modulo {p}")]
    NonResidue { a: i64, p: i64 },
    #[error("{kind} prime: {p} does not split in Z[q] for D = {d}")]
    NotSplit { p: i64, d: i64, kind: &'static str },
    #[error("no element of norm {p} found within search bound {bound}")]
    SplitSearchExhausted { p: i64, bound: i64 },
    #[error("matrix is singular")]
    Singular,
    #[error("lattice '{within}' is not a sublattice of '{sub}'")]
    NotSublattice { sub: String, within: String },
    #[error("expected a {expected} design, found {found}")]
    WrongVariant {
        expected: &'static str,
        found: &'static str,
    },
    #[error("hole-free construction failed: {missing} core points uncovered (first: {first:?})")]
    HoleFreeFailed { missing: usize, first: (i64, i64) },
    #[error("invalid design document: {0}")]
    InvalidDesign(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ck<T>(v: Option<T>) -> Result<T> {
    v.ok_or(Error::Overflow)
}
