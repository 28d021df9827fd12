use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Core failures after the config validated are invariant violations.
impl From<wbroadcast::Error> for CliError {
    fn from(e: wbroadcast::Error) -> Self {
        CliError::Invariant(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
