//! Command-line driver for `delannoy-core`: argument parsing, JSON and table
//! output, the registry cache and the acceptance suite.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use delannoy_core::{Cat, Error};

pub mod args;
pub mod cache;
pub mod commands;
pub mod render;
pub mod suite;

use args::{Cli, Command};
use render::{table, Output};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("registry cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Cap(_)) => EXIT_CAP,
            CliError::Core(Error::Invalid(_) | Error::Precondition(_) | Error::MissingLabel(_)) => EXIT_USAGE,
            CliError::Core(_) => EXIT_FALSIFIED,
            CliError::Usage(_) | CliError::Cache(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

/// Parse `argv`, run the command and write its output; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok((output, code)) => {
            let _ = out.write_all(output.text(cli.format).as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(Output, i32), CliError> {
    let cat = Cat::new();
    let cache = cli.cache.as_deref();
    let output = match &cli.command {
        Command::Homdim { n, m } => commands::homdim(*n, *m)?,
        Command::Decompose { object: Some(o), .. } => commands::decompose_object(&cat, cache, o)?,
        Command::Decompose { label: Some(l), .. } => commands::decompose_label(&cat, cache, l)?,
        Command::Decompose { .. } => return Err(CliError::Usage("give --object or --label".into())),
        Command::Restrict { label } => commands::restrict(&cat, cache, label)?,
        Command::Tensor { left, right } => commands::tensor(&cat, cache, left, right)?,
        Command::Eidem { n } => commands::eidem(&cat, *n)?,
        Command::Subalgebras { n } => commands::subalgebras(&cat, *n)?,
        Command::EtaleCheck { builtin } => commands::etale_check(&cat, cache, builtin)?,
        Command::Resideals { n } => commands::resideals(&cat, cache, *n)?,
        Command::Registry { build } => commands::registry(&cat, cache, *build)?,
        Command::Verify { suite, max_n } => {
            let reg = cache::obtain(&cat, cache, suite::registry_depth(*suite, *max_n))?;
            let report = suite::run(&reg, *suite, *max_n, cli.threads);
            let failed: Vec<_> = report.items.iter().filter(|i| !i.pass).collect();
            let code = if failed.is_empty() {
                EXIT_OK
            } else if failed.iter().all(|i| i.capped) {
                EXIT_CAP
            } else {
                EXIT_FALSIFIED
            };
            let rows: Vec<Vec<String>> = report
                .items
                .iter()
                .map(|i| {
                    let verdict = if i.pass { "PASS" } else { "FAIL" };
                    vec![i.id.to_string(), i.name.to_string(), verdict.to_string(), format!("{:.3}", i.seconds), i.detail.clone()]
                })
                .collect();
            let t = table(&["#", "item", "result", "seconds", "detail"], &rows);
            let json = serde_json::to_value(&report).map_err(|e| CliError::Usage(e.to_string()))?;
            return Ok((Output::new(json, t), code));
        }
    };
    let code = if output.falsified { EXIT_FALSIFIED } else { EXIT_OK };
    Ok((output, code))
}
