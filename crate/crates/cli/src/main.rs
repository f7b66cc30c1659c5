mod args;
mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
const ERROR_SCHEMA_VERSION: u32 = 1;

/// Anything that stops a run before an artifact is written.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn input(kind: &str, message: String) -> Self {
        CliError { kind: kind.to_string(), message }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError { kind: "internal".into(), message: e.to_string() }
    }
}

impl From<thurston_core::Error> for CliError {
    fn from(e: thurston_core::Error) -> Self {
        CliError { kind: e.kind().to_string(), message: e.to_string() }
    }
}

fn report(kind: &str, message: &str, field: &str) {
    let doc = json!({ "schema_version": ERROR_SCHEMA_VERSION, field: { "kind": kind, "message": message } });
    eprintln!("{doc}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report("usage", &e.to_string(), "error");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let artifact = match commands::run(&cli) {
        Ok(a) => a,
        Err(e) => {
            report(&e.kind, &e.message, "error");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    if let Err(e) = output::emit(cli.out.as_deref(), &artifact.bytes) {
        report(&e.kind, &e.message, "error");
        return ExitCode::from(EXIT_INPUT);
    }
    match artifact.flag {
        Some(msg) => {
            report("validation_flag", &msg, "validation");
            ExitCode::from(EXIT_VALIDATION)
        }
        None => ExitCode::SUCCESS,
    }
}
