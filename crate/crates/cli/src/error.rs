use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] tetra_census::Error),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn format(line: usize, msg: impl std::fmt::Display) -> Self {
        CliError::Format(format!("line {line}: {msg}"))
    }

    /// 2 for unreadable or malformed input, 1 for meshes or requests the
    /// library rejects.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Format(_) | CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::Check(_) => 1,
        }
    }
}
