//! Test matrix generators, Matrix Market I/O, run records and the
//! subcommands of the `schur-refine` tool.

pub mod commands;
pub mod gen;
pub mod mm;
pub mod record;

use commands::{EXIT_INPUT, EXIT_NOT_CONVERGED};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("Matrix Market: {0}")]
    MatrixMarket(String),
    #[error("invalid matrix specification: {0}")]
    InvalidSpec(String),
    #[error("report: {0}")]
    Record(String),
    #[error(transparent)]
    Core(#[from] schur_core::Error),
}

impl CliError {
    /// Exit code: 2 when the computation itself failed on valid input
    /// (coinciding eigenvalues, binary64 QR not converging), 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        use schur_core::Error as E;
        match self {
            CliError::Core(E::Separation { .. } | E::NoConvergence { .. } | E::NonFinite) => {
                EXIT_NOT_CONVERGED
            }
            _ => EXIT_INPUT,
        }
    }
}
