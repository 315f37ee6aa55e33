pub mod op_curve;
pub mod optimize;
pub mod throughput;
pub mod validate;

use crate::config::ConfigError;

/// Command failures mapped to process exit codes: configuration problems
/// exit 2, numerical/solver problems exit 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<harq_fso::Error> for CliError {
    fn from(e: harq_fso::Error) -> Self {
        match e {
            harq_fso::Error::InvalidParameter { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("io: {e}"))
    }
}
