//! Table and JSON writers. Every number goes out in fixed decimal notation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::config::Format;
use crate::CliError;

/// A JSON number printed with exactly `dp` decimals.
pub fn fixed(x: f64, dp: usize) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.dp$}");
    // "-0.0000" is a valid number but an ugly one
    let text = if text.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        text.trim_start_matches('-').to_owned()
    } else {
        text
    };
    Value::Number(Number::from_str(&text).expect("formatted float is a JSON number"))
}

pub fn fmt_fixed(x: f64, dp: usize) -> String {
    match fixed(x, dp) {
        Value::Number(n) => n.to_string(),
        _ => "NaN".to_owned(),
    }
}

/// Percent with one decimal, e.g. `4.2%`.
pub fn pct(x: f64) -> String {
    format!("{}%", fmt_fixed(100.0 * x, 1))
}

/// Percentage points with one decimal and explicit sign, e.g. `+6.0pp`.
pub fn pp(x: f64) -> String {
    let s = fmt_fixed(100.0 * x, 1);
    if s.starts_with('-') || s == "0.0" {
        format!("{s}pp")
    } else {
        format!("+{s}pp")
    }
}

/// A rectangular table that can be written as CSV or as a JSON array of rows.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn cell(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::output)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Self::cell)).map_err(CliError::output)?;
        }
        w.into_inner().map_err(|e| CliError::output(e.into_error()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, Value> =
                        self.header.iter().map(|h| h.to_string()).zip(row.iter().cloned()).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Writes files under the output directory and records which figure each one feeds.
pub struct Sink {
    pub dir: PathBuf,
    pub format: Format,
    written: Vec<PathBuf>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FigureEntry {
    pub figure: String,
    pub columns: Vec<String>,
}

pub const FIGURE_INDEX: &str = "figures.json";

impl Sink {
    pub fn new(dir: &Path, format: Format) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
        Ok(Sink { dir: dir.to_owned(), format, written: Vec::new() })
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    /// Writes `table` as `<stem>.csv` or `<stem>.json` depending on the format.
    pub fn write_table(&mut self, stem: &str, table: &Table) -> Result<PathBuf, CliError> {
        let name = format!("{stem}.{}", self.format.extension());
        match self.format {
            Format::Csv => self.write_bytes(&name, &table.to_csv()?),
            Format::Json => self.write_json(&name, &table.to_json()),
        }
    }

    /// Adds entries to `figures.json`, keeping whatever other commands put there.
    pub fn index(&mut self, entries: Vec<(PathBuf, &str, &[&str])>) -> Result<(), CliError> {
        let path = self.dir.join(FIGURE_INDEX);
        let mut map: BTreeMap<String, FigureEntry> = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_default(),
            Err(_) => BTreeMap::new(),
        };
        for (file, figure, columns) in entries {
            let key = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            map.insert(
                key,
                FigureEntry { figure: figure.to_owned(), columns: columns.iter().map(|c| c.to_string()).collect() },
            );
        }
        let mut text = serde_json::to_string_pretty(&map).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}
