//! Rendering of command results as CSV, JSON or an aligned text table.
//!
//! Exact values are always `p/q` strings. Float columns carry an `approx_`
//! prefix and are for display only.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use kothe::Verdict;
use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Table => "txt",
        }
    }
}

/// Result of one command: a row set plus a JSON body carrying the same data.
pub struct Document {
    pub command: &'static str,
    /// File name stem used under the output directory.
    pub stem: String,
    /// `key: value` lines printed above the rows.
    pub summary: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// JSON key holding the rows.
    pub rows_key: &'static str,
    pub json: Map<String, Value>,
    pub verdict: Option<Verdict>,
}

impl Document {
    pub fn new(command: &'static str, stem: impl Into<String>, columns: &[&str]) -> Self {
        Document {
            command,
            stem: stem.into(),
            summary: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            rows_key: "rows",
            json: Map::new(),
            verdict: None,
        }
    }

    pub fn summary(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.json.insert(key.to_string(), value.into());
    }

    pub fn set_verdict(&mut self, verdict: Verdict) {
        self.verdict = Some(verdict);
        self.summary("verdict", verdict);
        self.set("verdict", verdict.to_string());
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => Ok(self.render_json()),
            Format::Table => Ok(self.render_table()),
        }
    }

    fn render_csv(&self) -> Result<String, CliError> {
        let mut out = format!("# kothe {} schema {SCHEMA}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.summary {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    fn render_json(&self) -> String {
        let mut top = self.json.clone();
        top.insert("schema".into(), SCHEMA.into());
        top.insert("command".into(), self.command.into());
        top.insert("approx_fields".into(), "display only; exact values are the p/q strings".into());
        top.insert(self.rows_key.into(), self.rows_json());
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("json values serialize");
        text.push('\n');
        text
    }

    /// Rows as objects keyed by column. Integer and boolean cells become JSON
    /// scalars, `approx_` cells become numbers, everything else stays text.
    fn rows_json(&self) -> Value {
        let rows = self.rows.iter().map(|row| {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .zip(row)
                .map(|(col, cell)| (col.clone(), cell_json(col, cell)))
                .collect();
            Value::Object(obj)
        });
        Value::Array(rows.collect())
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            writeln!(out, "{k}: {v}").unwrap();
        }
        if self.columns.is_empty() {
            return out;
        }
        if !self.summary.is_empty() {
            out.push('\n');
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(&self.columns)).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", line(row)).unwrap();
        }
        out
    }
}

/// Writes to `--out`, else into the output directory, else to stdout.
/// Returns the path written, if any.
pub fn emit(
    doc: &Document,
    format: Format,
    out: Option<&Path>,
    out_dir: Option<&Path>,
) -> Result<Option<PathBuf>, CliError> {
    let text = doc.render(format)?;
    let target = match (out, out_dir) {
        (Some(path), _) => Some(path.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{}", doc.stem, format.extension()))),
        (None, None) => None,
    };
    match &target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| CliError::write(parent, e))?;
            }
            fs::write(path, text).map_err(|e| CliError::write(path, e))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::write(Path::new("<stdout>"), e))?;
        }
    }
    Ok(target)
}

/// Display float in a fixed, platform-independent form.
pub fn approx(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.6e}")
    }
}

fn cell_json(column: &str, cell: &str) -> Value {
    if cell.is_empty() {
        return Value::Null;
    }
    if column.starts_with("approx_") {
        return cell
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map_or_else(|| Value::String(cell.into()), Value::Number);
    }
    if let Ok(i) = cell.parse::<i64>() {
        return i.into();
    }
    match cell {
        "true" => true.into(),
        "false" => false.into(),
        _ => cell.into(),
    }
}
