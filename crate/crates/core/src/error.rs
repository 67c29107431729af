use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced anywhere in the simulation and analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "excess-phase solver did not converge for phi0 = {phi0} after {iterations} iterations"
    )]
    NonConvergence { phi0: f64, iterations: usize },

    #[error("at sample {index}: {source}")]
    AtSample {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("malformed trace header: {0}")]
    MalformedHeader(String),

    #[error("inconsistent timestep at row {row}: expected {expected_s} s, found {found_s} s")]
    InconsistentTimestep {
        row: usize,
        expected_s: f64,
        found_s: f64,
    },

    #[error("unsupported WAV encoding: {0}")]
    UnsupportedWav(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("check failed: {0}")]
    Assertion(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 = failed check, 2 = usage or
    /// configuration problem, 3 = I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Assertion(_) => 1,
            Error::Io { .. } => 3,
            Error::AtSample { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    /// Short machine-readable tag used in diagnostic records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidConfig(_) => "invalid_config",
            Error::NonConvergence { .. } => "non_convergence",
            Error::AtSample { .. } => "at_sample",
            Error::Degenerate(_) => "degenerate",
            Error::MalformedHeader(_) => "malformed_header",
            Error::InconsistentTimestep { .. } => "inconsistent_timestep",
            Error::UnsupportedWav(_) => "unsupported_wav",
            Error::Io { .. } => "io",
            Error::Assertion(_) => "assertion",
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($fmt:tt)+) => {
        {
            let ok: bool = $cond;
            if !ok {
                return Err($crate::error::Error::$variant(format!($($fmt)+)));
            }
        }
    };
}
pub(crate) use ensure;
