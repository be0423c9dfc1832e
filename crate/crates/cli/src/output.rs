//! CSV and JSON writers. Floats are written in their shortest round-trip
//! form so a re-read table reproduces the original values bit for bit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Column-major numeric table with a header row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_f64(v)))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| crate::error::failed(format!("csv error: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is ascii"))
    }
}

#[derive(Debug, Serialize)]
pub struct Document<'a, C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub config: &'a C,
    pub results: &'a R,
}

pub fn to_json<C: Serialize, R: Serialize>(config: &C, results: &R) -> Result<String, CliError> {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        config,
        results,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
/// Returns a label for the destination.
pub fn emit(path: Option<&Path>, text: &str) -> Result<PathBuf, CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
            Ok(p.to_path_buf())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(PathBuf::from("-"))
        }
    }
}

/// `dir/name.csv` becomes `dir/name.summary.json`.
pub fn summary_path(table_path: &Path) -> PathBuf {
    let stem = table_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".to_string());
    table_path.with_file_name(format!("{stem}.summary.json"))
}
