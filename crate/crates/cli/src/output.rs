//! Atomic file output in CSV or JSON.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use tempfile::NamedTempFile;

use crate::args::Format;
use crate::error::{CliError, CliResult};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::UInt(v) => Value::from(*v),
            Cell::Float(v) => float(*v),
            Cell::Text(v) => Value::from(v.as_str()),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::UInt(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// JSON number, or the strings `"+inf"`, `"-inf"`, `"nan"` for non-finite values.
pub fn float(v: f64) -> Value {
    if v.is_nan() {
        Value::from("nan")
    } else if v == f64::INFINITY {
        Value::from("+inf")
    } else if v == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        Value::from(v)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub struct Output {
    dir: PathBuf,
    format: Format,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path, format: Format) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Output { dir: dir.to_path_buf(), format, written: Vec::new() })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write_atomic(&mut self, file: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(file);
        let mut tmp = NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        tmp.write_all(bytes).and_then(|_| tmp.flush()).map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("output values serialize");
        bytes.push(b'\n');
        self.write_atomic(&format!("{name}.json"), &bytes)
    }

    /// Writes `name.csv` or `name.json` depending on `--format`.
    pub fn table(&mut self, name: &str, table: &Table) -> CliResult<()> {
        match self.format {
            Format::Json => self.json(name, &table.to_json()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let file = format!("{name}.csv");
                let fail = |e: csv::Error| CliError::input(&file, e);
                w.write_record(&table.columns).map_err(fail)?;
                for row in &table.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(fail)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::input(&file, e))?;
                self.write_atomic(&file, &bytes)
            }
        }
    }
}
