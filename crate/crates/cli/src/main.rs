//! `crs`: evaluate, expand and correlate with Cohen-Ramanujan sums.

mod args;
mod config;
mod error;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Format};
use config::RunConfig;
use error::CliError;

/// `CRS_THREADS` wins over `--threads`, which wins over the core count.
fn thread_count(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match std::env::var("CRS_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("CRS_THREADS must be a positive integer, got `{v}`")))?,
        Err(_) => match flag {
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    Ok(n)
}

fn render(cli: &Cli, config: &RunConfig, out: &run::Output) -> Result<String, CliError> {
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&json!({ "config": config, "result": out.result }))
            .map_err(|e| CliError::Usage(e.to_string()))?,
        Format::Csv => out
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage(format!("`{}` has no tabular output; use json or plain", config.command)))?,
        Format::Plain => out.plain.clone(),
    })
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let threads = thread_count(cli.threads)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let config = RunConfig::from_cli(cli, threads)?;
    let out = run::execute(&cli.command)?;
    let mut text = render(cli, &config, &out)?;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(!out.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
