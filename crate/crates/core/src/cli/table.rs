//! Tabular output shared by all commands.
//!
//! CSV: a schema line `# graphene-casimir schema=<v> command=<name>`, then
//! the header, then one record per row. JSON: one object holding the same
//! schema fields and the rows keyed by column name. Floats are written in
//! the shortest form that parses back to the same value; non-finite values
//! become the strings `inf`, `-inf`, `nan` in JSON.

use serde_json::{Map, Value};
use std::io::Write;

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(fmt_float(*v))),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io(e.to_string());
        match format {
            Format::Csv => {
                writeln!(
                    out,
                    "# graphene-casimir schema={SCHEMA_VERSION} command={}",
                    self.command
                )
                .map_err(io)?;
                let mut w = csv::Writer::from_writer(&mut *out);
                let csv_err = |e: csv::Error| CliError::Io(e.to_string());
                w.write_record(&self.columns).map_err(csv_err)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv)).map_err(csv_err)?;
                }
                w.flush().map_err(io)?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(k, v)| ((*k).to_owned(), v.json()))
                            .collect();
                        Value::Object(m)
                    })
                    .collect();
                let doc = serde_json::json!({
                    "schema": SCHEMA_VERSION,
                    "command": self.command,
                    "rows": rows,
                });
                serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
                writeln!(out).map_err(io)?;
            }
        }
        Ok(())
    }
}
