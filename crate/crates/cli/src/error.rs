use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] tavis_core::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown figure `{0}` (expected fig1 … fig8)")]
    UnknownFigure(String),

    #[error("unknown sweep parameter `{0}` (expected theta, big_omega, gamma or n)")]
    UnknownSweepParameter(String),

    #[error("malformed CSV: {0}")]
    MalformedCsv(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
