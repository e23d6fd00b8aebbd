use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] wisfbm::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const OVERFLOW: u8 = 3;
    pub const EMBEDDING: u8 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use wisfbm::Error as E;
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Core(E::NumericOverflow { .. }) => exit::OVERFLOW,
            CliError::Core(E::EmbeddingFailure { .. } | E::Cholesky(_)) => exit::EMBEDDING,
            CliError::Core(E::Configuration(_) | E::Argument(_) | E::Domain(_)) => exit::CONFIG,
            CliError::Core(E::Fit(_)) | CliError::Io(_) | CliError::Csv(_) => exit::FAILURE,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
