use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants are coarse on purpose: the CLI maps them onto process exit
/// codes, so each variant corresponds to one failure class.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Gamma pole at non-positive integer {0}")]
    Pole(String),

    #[error("precision must be at least {min} bits, got {got}")]
    Precision { min: u32, got: u32 },

    #[error("singular weight factor: n = {n}, step t = {t}, vertex j = {vertex} (n^2 - j^2 + z = 0)")]
    Singular { n: u64, t: usize, vertex: i64 },

    #[error("localization violated at n = {n}: disc holds {count} eigenvalue(s), expected {expected}")]
    Localization { n: u64, count: usize, expected: usize },

    #[error("eigensolver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
