use serde_json::{json, Value};
use superweight::charformula::CharError;
use superweight::lab::LabError;
use superweight::mult::MultError;
use superweight::rootdata::RootDataError;
use superweight::weights::WeightsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("spec-validation: {0}")]
    Spec(String),
    #[error("{code}: {message}")]
    Domain { code: String, message: String, needed: Vec<String> },
    #[error("io-error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) => 2,
            CliError::Domain { .. } | CliError::Io(_) => 1,
        }
    }

    pub fn gap(message: impl Into<String>, needed: Vec<String>) -> Self {
        CliError::Domain { code: "provider-gap".into(), message: message.into(), needed }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({"error": "usage", "message": m}),
            CliError::Spec(m) => json!({"error": "spec-validation", "message": m}),
            CliError::Io(m) => json!({"error": "io-error", "message": m}),
            CliError::Domain { code, message, needed } if code == "provider-gap" => {
                json!({"error": code, "message": message, "needed": needed})
            }
            CliError::Domain { code, message, .. } => json!({"error": code, "message": message}),
        }
    }

    /// Split a library error into its machine code (the text before the
    /// first colon) and message.
    fn domain(e: &dyn std::fmt::Display) -> Self {
        let s = e.to_string();
        let (code, message) = match s.split_once(": ") {
            Some((c, m)) if !c.contains(' ') => (c.to_string(), m.to_string()),
            _ => ("domain-error".to_string(), s.clone()),
        };
        CliError::Domain { code, message, needed: Vec::new() }
    }
}

impl From<MultError> for CliError {
    fn from(e: MultError) -> Self {
        match e {
            MultError::ProviderGap { reason, needed } => CliError::gap(reason, needed),
            MultError::Io(m) => CliError::Io(m),
            e => CliError::domain(&e),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::Mult(m) => m.into(),
            e => CliError::domain(&e),
        }
    }
}

impl From<WeightsError> for CliError {
    fn from(e: WeightsError) -> Self {
        CliError::domain(&e)
    }
}

impl From<RootDataError> for CliError {
    fn from(e: RootDataError) -> Self {
        CliError::domain(&e)
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::UnknownSuite(s) => CliError::Usage(format!("unknown suite {s:?}")),
            e => CliError::domain(&e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
