use dunkl_calculus::Error as CoreError;
use thiserror::Error;

use crate::expr::SyntaxError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("expression f: {0}")]
    Syntax(SyntaxError),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const RESONANCE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Syntax(_) | CliError::Io(_) => exit::INPUT,
            CliError::Core(e) => match e {
                CoreError::Resonance { .. }
                | CoreError::DivisorOfZero { .. }
                | CoreError::SingularSystem { .. } => exit::RESONANCE,
                CoreError::Residual { .. }
                | CoreError::NonConvergence { .. }
                | CoreError::Reconstruction { .. }
                | CoreError::RoundTrip { .. }
                | CoreError::IncompleteZeroSet { .. } => exit::NUMERICAL,
                _ => exit::INPUT,
            },
        }
    }
}
