use crate::rational::Q;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("window too large: {0}")]
    WindowTooLarge(String),
    #[error("empty piece in admissibility check")]
    EmptyPiece,
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("explicit family is not hereditary-closed")]
    NotHereditary,
    #[error("theta_n = 1 appears alongside other pairs")]
    DegenerateTheta,
    #[error("empty vector")]
    EmptyVector,
    #[error("support of {0} positions exceeds the exact engine limit {1}")]
    TooLarge(usize, usize),
    #[error("bad admissibility at node {0}")]
    BadAdmissibility(String),
    #[error("unknown character at node {0}")]
    UnknownCharacter(String),
    #[error("leaf outside support at node {0}")]
    LeafOutsideSupport(String),
    #[error("tolerance unreachable at the given horizon")]
    ToleranceUnreachable,
    #[error("budget exhausted (best ratio {best:?})")]
    BudgetExhausted { best: Option<Q> },
    #[error("no feasible vector")]
    Infeasible,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("cannot interleave: {0}")]
    CannotInterleave(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("sigma position {0} exceeds the character list of length {1}")]
    NOutOfRange(usize, usize),
    #[error("saturation exceeded the set-size cap {0}")]
    Explosion(usize),
    #[error("bounds too tight: {0}")]
    BoundsTooTight(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
