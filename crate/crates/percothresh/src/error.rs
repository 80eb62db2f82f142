use std::path::PathBuf;

use percothresh_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: CoreError },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 1 usage, 2 input, 3 solver non-convergence, 4 degenerate simulation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Input { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_) => 1,
                CoreError::NotConverged(_) | CoreError::MessagePassingNotConverged(_) => 3,
                CoreError::DegenerateCurve | CoreError::ZeroEmpiricalThreshold => 4,
                _ => 2,
            },
        }
    }
}
