//! Simulation harness, file formats and CLI plumbing on top of
//! [`mssr_core`]: Monte Carlo studies of every estimator (average
//! estimate, mean squared error, coverage, interval length), bias sweeps
//! across the reliability range, and the end-to-end real-data pipeline.

pub mod config;
pub mod data;
pub mod report;
pub mod study;

/// Harness-level error: configuration and IO problems are separated from
/// numerical failures inside an estimator, because the command line maps
/// them to different exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("estimator {name} failed: {source}")]
    Estimator {
        name: String,
        source: mssr_core::Error,
    },
    #[error(transparent)]
    Core(#[from] mssr_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Exit status class: 2 for anything the user can fix in the
    /// invocation or inputs, 3 for numerical failures during estimation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            Error::Estimator { .. } | Error::Core(_) => 3,
        }
    }
}
