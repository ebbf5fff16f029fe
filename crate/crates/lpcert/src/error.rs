//! Error type shared by all modules.

use crate::rational::Rational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch at line {line}: expected {expected} entries, found {found}")]
    RowArity {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("point is not feasible: constraint {index} has residual {residual}")]
    NotFeasible { index: usize, residual: Rational },

    #[error("direction is the zero vector")]
    ZeroDirection,

    #[error("direction is not a feasible direction at the given point")]
    NotFeasibleDirection,

    #[error(
        "constraint matrix has rank below the number of variables (or dependent equality rows)"
    )]
    RankDeficient,

    #[error("subset cap exceeded: enumeration needs {needed} subsets, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("point is not a nondegenerate vertex")]
    NotNondegenerate,

    #[error("point is not an optimal vertex: {0}")]
    NotOptimalVertex(String),

    #[error("multiplier is not dual feasible: {0} fails")]
    NotDualFeasible(&'static str),

    #[error("internal contract violation: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
