//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational: {0:?}")]
    MalformedRational(String),
    #[error("division by zero polynomial")]
    ZeroPolyDivision,
    #[error("inexact division: remainder is nonzero")]
    InexactDivision,
    #[error("determinant requires a square matrix, got {rows}x{cols}")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("division by the zero operator")]
    ZeroOperatorDivision,
    #[error("zero operator has no leading coefficient")]
    ZeroOperator,
    #[error("coefficient of order {0} is not a polynomial")]
    NonPolynomialCoefficient(usize),
    #[error("vacuum order must be at least 2, got {0}")]
    VacuumOrderTooSmall(u32),
    #[error("vacuum of order {order} needs {expected} constants, got {got}")]
    VacuumConstantCount {
        order: u32,
        expected: usize,
        got: usize,
    },
    #[error("duplicate lambda in cusp divisor: {0}")]
    DuplicateLambda(String),
    #[error("polynomial of degree {0} is not in the stabilizer (derivative does not vanish at a cusp)")]
    NotInStabilizer(usize),
    #[error("conjugation remainder is nonzero; operator does not stabilize")]
    NonzeroConjugationRemainder,
    #[error("{0} is not a simple root of the leading coefficient")]
    NotSimpleRoot(String),
    #[error("tau is not squarefree; divisor lies outside the involution domain")]
    TauNotSquarefree,
    #[error("series truncation {truncation} is insufficient (need at least {needed})")]
    TruncationInsufficient { truncation: usize, needed: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("parse error: {0}")]
    Parse(String),
}
