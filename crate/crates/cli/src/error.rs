use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Validation { field: Option<String>, message: String },

    #[error(transparent)]
    Solver(squo_core::Error),

    #[error(transparent)]
    NoBracket(squo_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: Some(field.into()),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Solver(_) => 3,
            CliError::NoBracket(_) => 4,
            CliError::Io { .. } | CliError::Encode(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation { .. } => "validation",
            CliError::Solver(_) => "solver",
            CliError::NoBracket(_) => "no_bracket",
            CliError::Io { .. } => "io",
            CliError::Encode(_) => "encode",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        match self {
            CliError::Validation { field: Some(field), .. } => {
                body["field"] = json!(field);
            }
            CliError::Solver(e) | CliError::NoBracket(e) => {
                if let squo_core::Error::AtField { h, .. } = e {
                    body["h"] = json!(h);
                }
            }
            CliError::Io { path, .. } => {
                body["path"] = json!(path.display().to_string());
            }
            _ => {}
        }
        json!({ "error": body })
    }
}

fn tolerance_field(field: &str) -> bool {
    matches!(field, "tol_deg" | "tol_bloch" | "eer_floor")
}

impl From<squo_core::Error> for CliError {
    fn from(e: squo_core::Error) -> Self {
        use squo_core::Error as E;
        match e {
            E::InvalidModel { field, ref reason } => {
                CliError::validation(format!("model.{field}"), format!("model.{field}: {reason}"))
            }
            E::InvalidSolver { field, ref reason } => {
                let section = if tolerance_field(field) { "tolerances" } else { "solver" };
                CliError::validation(format!("{section}.{field}"), format!("{section}.{field}: {reason}"))
            }
            E::TooLarge { .. } => CliError::validation("model.n_sites", e.to_string()),
            E::InvalidSweep(ref reason) => CliError::validation("scan", format!("scan: {reason}")),
            E::NoBracket { .. } => CliError::NoBracket(e),
            E::AtField { ref source, .. } if matches!(**source, E::NoBracket { .. }) => CliError::NoBracket(e),
            other => CliError::Solver(other),
        }
    }
}
