use std::path::PathBuf;

use thiserror::Error;

/// Stable exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A certified negative answer: no coloring at this level, or a failed
    /// realization check.
    pub const CERTIFIED: i32 = 1;
    pub const SOLVER_FAILURE: i32 = 2;
    pub const ORDERING_VIOLATION: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const NO_INPUT: i32 = 66;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    MissingInput {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] chromabound::Error),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use chromabound::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::MissingInput { .. } => exit::NO_INPUT,
            CliError::Core(E::Graph6 { .. } | E::Dimacs { .. } | E::Sdpa { .. } | E::InvalidArgument(_) | E::Json(_)) => {
                exit::USAGE
            }
            CliError::Core(_) | CliError::Output(_) => exit::SOLVER_FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
