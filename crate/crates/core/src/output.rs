//! Run manifests and machine-readable table output.
//!
//! Every emitted document carries its manifest: the subcommand, the exact
//! parameters, the constants table in force, the toolkit version, and a
//! timestamp. Re-running the recorded parameters reproduces the numeric
//! payload byte for byte; only the timestamp line differs.
//!
//! CSV: `#`-prefixed manifest preamble, then an RFC-4180-style header row
//! and data rows with LF line endings and locale-independent formatting.
//! Floats use a configurable number of significant digits.
//! JSON: one object `{ "manifest": ..., <payload>, "rows": [...] }`; the
//! numbers serialize at full round-trip precision.

use std::collections::BTreeMap;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::constants::CONSTANTS_TABLE_ID;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub toolkit_version: String,
    pub constants_table_id: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: BTreeMap<String, String>, seed: Option<u64>) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            constants_table_id: CONSTANTS_TABLE_ID.to_string(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        }
    }
}

/// One table cell. Null renders as an empty CSV field and JSON null.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Float(f64),
    UInt(u64),
    Int(i64),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}
impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::UInt(x)
    }
}
impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::UInt(x as u64)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::UInt(x as u64)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        match x {
            Some(v) => v.into(),
            None => Cell::Null,
        }
    }
}

/// Scientific notation with `digits` significant figures.
fn format_float(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// RFC-4180 field escaping; our own values never need it, but config-fed
/// strings might.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn to_csv(&self, digits: usize) -> String {
        match self {
            Cell::Text(s) => csv_field(s),
            Cell::Float(x) => format_float(*x, digits),
            Cell::UInt(x) => x.to_string(),
            Cell::Int(x) => x.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // Non-finite values have no JSON number form; fall back to text.
            Cell::Float(x) => serde_json::Number::from_f64(*x)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(format!("{x}"))),
            Cell::UInt(x) => json!(x),
            Cell::Int(x) => json!(x),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Null => Value::Null,
        }
    }
}

/// A manifest plus one table of rows, ready to render either way.
#[derive(Debug, Clone)]
pub struct Document {
    pub manifest: RunManifest,
    /// Extra context lines; rendered as `#` comments in CSV only.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Document {
    pub fn new(manifest: RunManifest, columns: &[&str]) -> Self {
        Document {
            manifest,
            comments: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, digits: usize) -> Result<String> {
        if !(1..=17).contains(&digits) {
            return Err(Error::domain(format!(
                "--digits must lie in 1..=17, got {digits}"
            )));
        }
        let m = &self.manifest;
        let mut out = String::new();
        out.push_str(&format!("# tunnelkit {}\n", m.subcommand));
        out.push_str(&format!("# toolkit_version = {}\n", m.toolkit_version));
        out.push_str(&format!("# constants_table_id = {}\n", m.constants_table_id));
        out.push_str(&format!("# timestamp = {}\n", m.timestamp));
        if let Some(seed) = m.seed {
            out.push_str(&format!("# seed = {seed}\n"));
        }
        for (k, v) in &m.parameters {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(
            &self
                .columns
                .iter()
                .map(|c| csv_field(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &self.rows {
            let line = row
                .iter()
                .map(|cell| cell.to_csv(digits))
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&line);
            out.push('\n');
        }
        Ok(out)
    }

    /// Rows as an array of column-keyed objects.
    pub fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (col, cell) in self.columns.iter().zip(row) {
                        obj.insert(col.clone(), cell.to_json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    /// Full JSON document; `extra` contributes payload keys next to the
    /// manifest and rows.
    pub fn to_json(&self, extra: Map<String, Value>) -> Result<String> {
        let mut root = Map::new();
        root.insert(
            "manifest".to_string(),
            serde_json::to_value(&self.manifest)
                .map_err(|e| Error::domain(format!("manifest serialization failed: {e}")))?,
        );
        for (k, v) in extra {
            root.insert(k, v);
        }
        root.insert("rows".to_string(), self.rows_json());
        let mut text = serde_json::to_string_pretty(&Value::Object(root))
            .map_err(|e| Error::domain(format!("JSON serialization failed: {e}")))?;
        text.push('\n');
        Ok(text)
    }
}

/// Write to a file path, or to stdout for `-`.
pub fn write_destination(out: &str, content: &str) -> Result<()> {
    if out == "-" {
        use std::io::Write;
        std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Error::domain(format!("cannot write to stdout: {e}")))
    } else {
        std::fs::write(out, content)
            .map_err(|e| Error::domain(format!("cannot write `{out}`: {e}")))
    }
}
