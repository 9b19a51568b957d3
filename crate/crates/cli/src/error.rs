use std::fmt;
use std::process::ExitCode;

use fusion_core::file::FileError;
use fusion_core::FrameError;

/// Failure of a subcommand, carrying its documented exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters (exit 2).
    Usage(String),
    /// Unreadable or malformed input (exit 3).
    Parse(String),
    /// The input system is not a frame (exit 4).
    NotAFrame(String),
    /// Arity or dimension mismatch between inputs (exit 5).
    Mismatch(String),
    /// Verification ran but some checks failed (exit 1).
    ChecksFailed(Vec<String>),
    /// Output could not be written (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::NotAFrame(_) => 4,
            CliError::Mismatch(_) => 5,
            CliError::ChecksFailed(_) | CliError::Io(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::NotAFrame(m) => write!(f, "not a frame: {m}"),
            CliError::Mismatch(m) => write!(f, "structural mismatch: {m}"),
            CliError::ChecksFailed(ids) => write!(f, "failing checks: {}", ids.join(", ")),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// Maps library errors raised while computing on already-loaded inputs.
impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::NotAFrame { .. } | FrameError::Singular { .. } => {
                CliError::NotAFrame(e.to_string())
            }
            FrameError::DimensionMismatch { .. }
            | FrameError::ArityMismatch { .. }
            | FrameError::NotInSubspace { .. } => CliError::Mismatch(e.to_string()),
            FrameError::BadParameters(_) | FrameError::InvalidWeight(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Parse(e.to_string())
    }
}
