//! Command-line front end for the `hillbasis` library.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use config::Settings;
use error::{CliError, CliResult, OK, USAGE, VERIFY_FAILED};

fn execute(cli: &Cli) -> CliResult<i32> {
    let settings = Settings::resolve(cli.command, &cli.opts)?;
    let (text, code) = match cli.command {
        Command::Beta => (commands::beta::run(&settings)?, OK),
        Command::Spectrum => (commands::spectrum::run(&settings)?, OK),
        Command::Verdict => (commands::verdict::run(&settings)?, OK),
        Command::Verify => {
            let s = commands::verify::run(&settings)?;
            (s.text, if s.passed { OK } else { VERIFY_FAILED })
        }
    };
    output::emit(&settings, &text)?;
    Ok(code)
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            code
        }
    }
}
