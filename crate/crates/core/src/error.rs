use alloc::boxed::Box;
use alloc::string::String;

use crate::percolation::MessageState;
use crate::spectral::SpectralResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("order-{order} path count exceeds the cap of {cap} paths")]
    PathLimitExceeded { order: usize, cap: usize },

    #[error("operator dimension {dim} exceeds the dense cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("operator has negative entries; the shifted power method needs a nonnegative matrix")]
    NegativeEntries,

    #[error("spectral solver did not converge (radius estimate {:.6}, residual {:.3e})", .0.radius, .0.residual)]
    NotConverged(SpectralResult),

    #[error("message passing did not converge")]
    MessagePassingNotConverged(Box<MessageState>),

    #[error("second-largest cluster curve has no peak above p = 0")]
    DegenerateCurve,

    #[error("empirical threshold must be positive")]
    ZeroEmpiricalThreshold,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
