use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit 2.
    Usage(String),
    Core(crs_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use crs_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Parse(_) | E::Domain(_) | E::ZeroArgument(_) | E::Io(_)) => 2,
            CliError::Core(_) => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Usage(message) => json!({ "error": { "kind": "usage", "message": message } }),
            CliError::Core(e) => json!({ "error": { "kind": e.kind(), "message": e.to_string() } }),
        }
    }
}

impl From<crs_core::Error> for CliError {
    fn from(e: crs_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}
