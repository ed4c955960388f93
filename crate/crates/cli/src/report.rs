use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::CliResult;

pub const SCHEMA_VERSION: u32 = 1;

/// Envelope of every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<C, R> {
    pub schema_version: u32,
    pub command: String,
    pub config: C,
    pub result: R,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(command: &str, config: C, result: R) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config,
            result,
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| crate::error::CliError::Domain(format!("json error: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// `{:.16e}`: 17 significant digits, locale-free.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// Renders a CSV table with a header row.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::CliError::Domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// What a command produced: text for stdout and files to write.
#[derive(Debug, Default)]
pub struct Emitted {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Emitted {
    /// Sends `text` to `path`, or to stdout when there is none.
    pub fn route(&mut self, path: Option<PathBuf>, text: String) {
        match path {
            Some(p) => self.files.push((p, text)),
            None => self.stdout.push_str(&text),
        }
    }

    pub fn write(self) -> CliResult<()> {
        use std::io::Write;
        for (path, text) in &self.files {
            std::fs::write(path, text)?;
        }
        let mut out = std::io::stdout().lock();
        out.write_all(self.stdout.as_bytes())?;
        out.flush()?;
        Ok(())
    }
}
