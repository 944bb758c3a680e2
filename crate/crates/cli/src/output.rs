//! Tabular output: CSV with `#` metadata lines, and a JSON mirror.
//!
//! CSV layout:
//! ```text
//! # config {"command":"metrics",...}
//! # summary {"kt_c":0.3466,...}
//! z_re,z_im,theta,...
//! 1.0000000000000000e0,0.0000000000000000e0,...
//! ```
//! Numbers carry 17 significant digits so every value re-parses exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub config: Value,
    #[serde(default)]
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(config: Value, columns: &[&str]) -> Self {
        Table {
            config,
            summary: Map::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# config {}\n", self.config));
        if !self.summary.is_empty() {
            s.push_str(&format!("# summary {}\n", Value::Object(self.summary.clone())));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
        }
    }

    pub fn parse_csv(text: &str) -> Result<Table, CliError> {
        let bad = |m: &str| CliError::input(format!("csv: {m}"));
        let mut config = Value::Null;
        let mut summary = Map::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# config ") {
                config = serde_json::from_str(rest).map_err(|e| bad(&e.to_string()))?;
            } else if let Some(rest) = line.strip_prefix("# summary ") {
                match serde_json::from_str(rest).map_err(|e| bad(&e.to_string()))? {
                    Value::Object(m) => summary = m,
                    _ => return Err(bad("summary is not an object")),
                }
            } else if line.starts_with('#') || line.trim().is_empty() {
                continue;
            } else if columns.is_none() {
                columns = Some(line.split(',').map(str::to_string).collect());
            } else {
                let row = line
                    .split(',')
                    .map(parse_number)
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|_| bad(&format!("bad row {line:?}")))?;
                rows.push(row);
            }
        }
        let columns = columns.ok_or_else(|| bad("missing header"))?;
        if rows.iter().any(|r| r.len() != columns.len()) {
            return Err(bad("row length does not match header"));
        }
        Ok(Table {
            config,
            summary,
            columns,
            rows,
        })
    }

    pub fn parse_json(text: &str) -> Result<Table, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("json: {e}")))
    }

    pub fn parse(text: &str, format: Format) -> Result<Table, CliError> {
        match format {
            Format::Csv => Table::parse_csv(text),
            Format::Json => Table::parse_json(text),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn parse_number(s: &str) -> Result<f64, std::num::ParseFloatError> {
    s.trim().parse::<f64>()
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
