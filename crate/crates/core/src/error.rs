use thiserror::Error;

use crate::solver::SolveStatus;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph6 error at byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },

    #[error("DIMACS error on line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("SDPA error on line {line}: {message}")]
    Sdpa { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} count {count} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("exact search refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("solver stopped with status {status:?}")]
    Solver { status: SolveStatus },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear algebra failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
