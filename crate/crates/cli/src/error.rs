use std::fmt;

use hillbasis::Error;

pub const OK: i32 = 0;
pub const VERIFY_FAILED: i32 = 1;
pub const SINGULAR: i32 = 2;
pub const LOCALIZATION: i32 = 3;
pub const CRITERIA: i32 = 4;
pub const USAGE: i32 = 64;

/// A message together with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, message: message.into() }
    }

    pub fn io(err: std::io::Error, what: &str) -> Self {
        Self { code: USAGE, message: format!("{what}: {err}") }
    }

    /// Library errors outside the verdict command.
    pub fn from_lib(err: Error) -> Self {
        Self { code: lib_code(&err, USAGE), message: err.to_string() }
    }

    /// Library errors raised while forming a verdict.
    pub fn from_criteria(err: Error) -> Self {
        Self { code: lib_code(&err, CRITERIA), message: err.to_string() }
    }
}

fn lib_code(err: &Error, math: i32) -> i32 {
    match err {
        Error::Singular { .. } => SINGULAR,
        Error::Localization { .. } | Error::NonConvergence { .. } => LOCALIZATION,
        Error::Config(_) | Error::Parse(_) | Error::Precision { .. } => USAGE,
        Error::Domain(_) | Error::Degenerate(_) | Error::Pole(_) => math,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;
