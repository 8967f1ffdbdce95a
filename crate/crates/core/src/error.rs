use thiserror::Error;

use crate::model::{Direction, VarId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("row {row} is not row convex")]
    NotRowConvex { row: usize },
    #[error("row {row}: interval [{lo}, {hi}] is invalid for a column domain of size {cols}")]
    InvalidInterval { row: usize, lo: usize, hi: usize, cols: usize },
    #[error("constraint is neither down staircase nor up staircase")]
    NotGs,
    #[error("operands are defined over different domains")]
    DomainMismatch,
    #[error("operands mix down staircase and up staircase classes")]
    MixedClasses,
    #[error("result is not representable as one interval per row")]
    NotRepresentable,
    #[error("duplicate constraint on pair ({0}, {1})")]
    DuplicateConstraint(VarId, VarId),
    #[error("constraint relates variable {0} to itself")]
    SelfConstraint(VarId),
    #[error("unknown variable {0}")]
    UnknownVariable(VarId),
    #[error("constraint ({row}, {col}) is not {expected}")]
    ClassMismatch { row: VarId, col: VarId, expected: Direction },
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("instance too large for enumeration: {0} tuples")]
    TooLarge(u128),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: value {value} is not in the domain of {var}")]
    UnknownValue { line: usize, value: i64, var: String },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}
