use gamma_entropy_core::Error as CoreError;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("line {line}: cannot parse {token:?} as a number")]
    Parse { line: usize, token: String },
    #[error("line {line}: value {value} is not a positive finite number")]
    NonPositive { line: usize, value: f64 },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("config key {key:?}: {message}")]
    Config { key: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Parse { .. } => "parse",
            CliError::NonPositive { .. } => "invalid_observation",
            CliError::Io { .. } => "io",
            CliError::Config { .. } => "config",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut detail = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Parse { line, .. } | CliError::NonPositive { line, .. } => {
                detail["line"] = json!(line);
            }
            CliError::Config { key, .. } => detail["key"] = json!(key),
            _ => {}
        }
        json!({ "error": detail })
    }
}

pub type CliResult<T> = Result<T, CliError>;
