//! Deterministic CSV and JSON artifacts. CSV files open with `#` lines naming the format version
//! and echoing every parameter, then a fixed column header.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub const CSV_FORMAT_VERSION: u32 = 1;

pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
    preamble: String,
    trailer: String,
}

impl CsvTable {
    pub fn new(kind: &str, params: &[(&str, String)], columns: &[&str]) -> Result<Self, CliError> {
        let mut preamble = format!("# thurston {kind} csv v{CSV_FORMAT_VERSION}\n");
        for (k, v) in params {
            preamble.push_str(&format!("# {k}={v}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(columns).map_err(CliError::internal)?;
        Ok(CsvTable { writer, preamble, trailer: String::new() })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(CliError::internal)
    }

    /// A `#` line after the table (summaries).
    pub fn note(&mut self, line: impl AsRef<str>) {
        self.trailer.push_str("# ");
        self.trailer.push_str(line.as_ref());
        self.trailer.push('\n');
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, CliError> {
        let body = self.writer.into_inner().map_err(|e| CliError::internal(e.into_error()))?;
        let mut out = self.preamble.into_bytes();
        out.extend(body);
        out.extend(self.trailer.into_bytes());
        Ok(out)
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(CliError::internal)?;
    v.push(b'\n');
    Ok(v)
}

pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::input("io", format!("cannot write '{}': {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(CliError::internal)
        }
    }
}

/// Shortest round-trip float formatting, exponent form for very large or small magnitudes.
pub fn f(x: f64) -> String {
    let s = format!("{x:?}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

pub fn opt(x: Option<f64>) -> String {
    x.map(f).unwrap_or_default()
}
