use std::io;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const DOMAIN: i32 = 1;
    pub const IO: i32 = 2;
    pub const VERIFICATION_FAILED: i32 = 3;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] wpvol::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => exit::USAGE,
            CliError::Core(wpvol::Error::Domain(_)) => exit::DOMAIN,
            CliError::Core(wpvol::Error::Numeric(_)) => exit::VERIFICATION_FAILED,
            CliError::Core(wpvol::Error::Storage(_) | wpvol::Error::Io(_)) | CliError::Io(_) => exit::IO,
            CliError::Verification(_) => exit::VERIFICATION_FAILED,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
