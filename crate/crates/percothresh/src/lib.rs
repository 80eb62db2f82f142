//! File IO, parallel drivers and experiment pipelines on top of
//! `percothresh-core`. The `percothresh` binary is a thin CLI over this.

pub mod error;
pub mod experiments;
pub mod io;
pub mod parallel;

pub use error::CliError;
