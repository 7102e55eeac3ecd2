use indicator_cdf::experiment::ConfigError;
use indicator_cdf::formats::FormatError;
use indicator_cdf::{EstimateError, SimError};

/// Exit status for malformed input, bad configs and invalid arguments.
pub const EXIT_INVALID: u8 = 2;
/// Exit status when the estimator rejects otherwise valid data.
pub const EXIT_ESTIMATOR: u8 = 3;
/// Exit status for I/O and other runtime failures.
pub const EXIT_RUNTIME: u8 = 1;

#[derive(Debug)]
pub struct CliError {
    code: &'static str,
    exit: u8,
    message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: "invalid_input",
            exit: EXIT_INVALID,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: "io_error",
            exit: EXIT_RUNTIME,
            message: message.into(),
        }
    }

    pub fn exit_status(&self) -> u8 {
        self.exit
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.code, "message": self.message }).to_string()
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        let exit = match e {
            EstimateError::InvalidInput(_) => EXIT_INVALID,
            _ => EXIT_ESTIMATOR,
        };
        Self {
            code: e.code(),
            exit,
            message: e.to_string(),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let code = match e {
            SimError::InvalidPartition { .. } => "invalid_partition",
            _ => "invalid_input",
        };
        Self {
            code,
            exit: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self {
            code: "invalid_config",
            exit: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io(io) => io.into(),
            FormatError::Estimate(inner) => inner.into(),
            FormatError::Config(inner) => inner.into(),
            other => Self {
                code: "malformed_input",
                exit: EXIT_INVALID,
                message: other.to_string(),
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: "io_error",
            exit: EXIT_RUNTIME,
            message: e.to_string(),
        }
    }
}
