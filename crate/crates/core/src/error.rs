use thiserror::Error;

use crate::basis::CaseTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("incompatible cyclotomic orders {left} and {right}")]
    IncompatibleOrders { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole")]
    EvaluationAtPole,
    #[error("operation requires {expected}, parameters are {found}")]
    CaseMismatch { expected: CaseTag, found: CaseTag },
    #[error("integral not convergent: {0}")]
    NotConvergent(String),
    #[error("x lies on the lattice where 1 - q^(Nx) vanishes")]
    SingularX,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
