use std::io::Write;

use serde::Serialize;

use crate::config::Settings;
use crate::error::{CliError, CliResult};

pub fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::usage(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// CSV text from a header and string records.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::usage(format!("writing CSV: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(format!("writing CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::usage(format!("writing CSV: {e}")))
}

/// Writes to `--out` or stdout.
pub fn emit(settings: &Settings, text: &str) -> CliResult<()> {
    match &settings.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(e, &format!("writing {}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::io(e, "writing stdout"))
        }
    }
}

pub fn f(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt_f(x: Option<f64>) -> String {
    x.map(f).unwrap_or_default()
}
