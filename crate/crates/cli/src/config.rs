use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Cli, Command, ExpandCommand, Format};
use crate::error::CliError;

/// Echo of a run, sufficient to repeat it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand path, e.g. `expand eval`.
    pub command: String,
    /// Flag name to value.
    pub params: BTreeMap<String, Value>,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    pub thread_count: usize,
    /// Every computation is deterministic.
    pub seedless: bool,
}

fn params_of<T: Serialize>(args: &T) -> Result<BTreeMap<String, Value>, CliError> {
    match serde_json::to_value(args).map_err(|e| CliError::Usage(e.to_string()))? {
        Value::Object(map) => Ok(map.into_iter().collect()),
        _ => Err(CliError::Usage("arguments did not serialize to a map".into())),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli, thread_count: usize) -> Result<Self, CliError> {
        let (command, params) = match &cli.command {
            Command::Eval(a) => ("eval", params_of(a)?),
            Command::Table(a) => ("table", params_of(a)?),
            Command::Totient(a) => ("totient", params_of(a)?),
            Command::Expand { command } => match command {
                ExpandCommand::Eval(a) => ("expand eval", params_of(a)?),
                ExpandCommand::Coeffs(a) => ("expand coeffs", params_of(a)?),
                ExpandCommand::Extract(a) => ("expand extract", params_of(a)?),
            },
            Command::Correlate(a) => ("correlate", params_of(a)?),
            Command::Constants(a) => ("constants", params_of(a)?),
            Command::Lemmas(a) => ("lemmas", params_of(a)?),
            Command::Verify(a) => ("verify", params_of(a)?),
            Command::Replay(a) => ("replay", params_of(a)?),
        };
        Ok(Self {
            command: command.into(),
            params,
            output_format: cli.format,
            output_path: cli.output.clone(),
            thread_count,
            seedless: true,
        })
    }

    /// Command line that reproduces this run. Output goes to stdout.
    pub fn to_argv(&self) -> Result<Vec<String>, CliError> {
        let format = serde_json::to_value(self.output_format).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut argv = vec!["crs".to_string(), "--format".into(), scalar(&format)?];
        argv.extend(self.command.split_whitespace().map(String::from));
        for (key, value) in &self.params {
            let flag = format!("--{key}");
            match value {
                Value::Null | Value::Bool(false) => {}
                Value::Bool(true) => argv.push(flag),
                Value::Array(items) if items.is_empty() => {}
                Value::Array(items) => {
                    let joined = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(",");
                    argv.push(format!("{flag}={joined}"));
                }
                v => argv.push(format!("{flag}={}", scalar(v)?)),
            }
        }
        Ok(argv)
    }
}

fn scalar(v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(CliError::Usage(format!("cannot turn `{other}` into a flag value"))),
    }
}
