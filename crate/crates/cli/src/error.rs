use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config does not match the schema: {}", .0.join("; "))]
    Schema(Vec<String>),
    #[error(transparent)]
    Numerical(#[from] sgn_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) => 2,
            CliError::Numerical(_) | CliError::Io { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Schema(_) => "schema",
            CliError::Io { .. } => "io",
            CliError::Numerical(e) => match e {
                sgn_core::Error::InadmissibleSpeed { .. } => "inadmissible_speed",
                sgn_core::Error::Cavitation { .. } => "cavitation",
                sgn_core::Error::Instability { .. } => "instability",
                sgn_core::Error::IntegrationDiverged { .. } | sgn_core::Error::StepSizeUnderflow { .. } => {
                    "integration_failure"
                }
                _ => "domain",
            },
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> Value {
        let mut body = json!({"kind": self.kind(), "message": self.to_string()});
        if let CliError::Schema(problems) = self {
            body["fields"] = json!(problems);
        }
        json!({ "error": body })
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::io("writing csv", std::io::Error::other(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;
