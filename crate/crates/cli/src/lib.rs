//! The `gcirc` command-line tool.
//!
//! Every command prints one JSON document
//! `{"status": "ok"|"error", "payload": ..., "diagnostics": [...]}` and exits
//! with 0 on success, 2 on a domain or hypothesis error, 3 on a failed
//! verification and 4 on malformed input.

mod args;
mod commands;
mod golden;
mod output;
mod property;

use std::ffi::OsString;

use clap::Parser;
use serde::Serialize;
use serde_json::Value;

pub use args::{Cli, Command};
pub use output::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Domain(String),
    Verification(String),
    Malformed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Malformed(_) => EXIT_MALFORMED,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Verification(m) | CliError::Malformed(m) => m,
        }
    }
}

impl From<gcirc::GcircError> for CliError {
    fn from(e: gcirc::GcircError) -> Self {
        match e {
            gcirc::GcircError::OracleFailure(_) => CliError::Verification(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

/// What a command produced before it is wrapped into a [`CommandResult`].
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub payload: Value,
    pub diagnostics: Vec<String>,
    /// A check inside the command did not hold.
    pub failed: bool,
}

impl Outcome {
    pub fn ok(payload: Value) -> Self {
        Outcome {
            payload,
            diagnostics: Vec::new(),
            failed: false,
        }
    }

    pub fn note(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }

    pub fn fail(mut self, msg: impl Into<String>) -> Self {
        self.failed = true;
        self.diagnostics.push(msg.into());
        self
    }
}

pub(crate) fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// Runs a parsed command line and returns the result with its exit code.
pub fn execute(cli: &Cli) -> (CommandResult, i32) {
    match commands::dispatch(cli) {
        Ok(out) if !out.failed => (
            CommandResult {
                status: Status::Ok,
                payload: out.payload,
                diagnostics: out.diagnostics,
            },
            EXIT_OK,
        ),
        Ok(out) => (
            CommandResult {
                status: Status::Error,
                payload: out.payload,
                diagnostics: out.diagnostics,
            },
            EXIT_VERIFY,
        ),
        Err(e) => (
            CommandResult {
                status: Status::Error,
                payload: Value::Null,
                diagnostics: vec![e.message().to_string()],
            },
            e.exit_code(),
        ),
    }
}

/// Parses `args`, executes, prints and writes `--json-out`. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_MALFORMED,
            };
        }
    };
    let (result, mut code) = execute(&cli);
    let text = render(&result);
    {
        use std::io::Write;
        // a closed pipe downstream is not an error of ours
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            code = EXIT_MALFORMED;
        }
    }
    code
}
