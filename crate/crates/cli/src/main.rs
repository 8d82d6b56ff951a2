//! `mie`: command-line front end for enhancement, detection, evaluation,
//! abundance analysis and synthetic fixtures.

mod cli;
mod commands;
mod config;
mod input;

use std::ffi::OsString;
use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use cli::Cli;

/// Bad arguments or inputs detected before any work starts (exit 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

fn run(args: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();

    match commands::run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let usage = e.downcast_ref::<UsageError>().is_some();
            let causes: Vec<String> = e.chain().skip(1).map(|c| c.to_string()).collect();
            eprintln!(
                "{}",
                serde_json::json!({
                    "status": "error",
                    "command": cli.command.name(),
                    "kind": if usage { "usage" } else { "stage" },
                    "error": e.to_string(),
                    "causes": causes,
                })
            );
            if usage {
                2
            } else {
                1
            }
        }
    }
}
