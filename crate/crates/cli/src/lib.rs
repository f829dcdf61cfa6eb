//! Command implementations behind the `piezoloc` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{evaluate, simulate, train, Method, SimulateSummary, TrainSummary};
pub use config::RunConfig;
pub use report::{Report, ReportRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An input artifact that is missing or malformed.
    #[error("{0}")]
    Input(piezoloc_core::Error),
    #[error("{0}")]
    Internal(piezoloc_core::Error),
}

impl CliError {
    /// 2 for anything the user can fix by changing arguments or inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<piezoloc_core::Error> for CliError {
    fn from(e: piezoloc_core::Error) -> Self {
        CliError::Internal(e)
    }
}

/// Classifies errors raised while reading user-supplied artifacts.
pub(crate) fn input_error(e: piezoloc_core::Error) -> CliError {
    use piezoloc_core::Error as E;
    match e {
        E::Parse { .. } | E::Io { .. } | E::LengthMismatch { .. } | E::Domain(_) | E::Range { .. } => {
            CliError::Input(e)
        }
        other => CliError::Internal(other),
    }
}
