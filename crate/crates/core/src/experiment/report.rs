use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::ser::{Serialize, SerializeMap, Serializer};

use super::OutputFormat;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    /// CSV cell text. Reals carry 17 significant digits.
    fn to_cell(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Real(x) => format!("{x:.16e}"),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn from_cell(s: &str) -> Value {
        if let Ok(i) = s.parse::<i64>() {
            return Value::Int(i);
        }
        match s {
            "true" => return Value::Bool(true),
            "false" => return Value::Bool(false),
            _ => {}
        }
        match s.parse::<f64>() {
            Ok(x) => Value::Real(x),
            Err(_) => Value::Text(s.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Int(i) => s.serialize_i64(*i),
            Value::Real(x) => s.serialize_f64(*x),
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Text(t) => s.serialize_str(t),
        }
    }
}

/// Ordered `key -> value` cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportRow(Vec<(String, Value)>);

impl ReportRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.0.push((key.into(), value.into()));
        self
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.0.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }

    pub fn cells(&self) -> &[(String, Value)] {
        &self.0
    }
}

impl Serialize for ReportRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Rows sharing one column schema.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    columns: Vec<String>,
    rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row whose keys must match the columns in order.
    pub fn push(&mut self, row: ReportRow) -> Result<()> {
        if !row.keys().eq(self.columns.iter().map(String::as_str)) {
            return Err(Error::ShapeMismatch(format!(
                "row keys {:?} do not match report columns {:?}",
                row.keys().collect::<Vec<_>>(),
                self.columns
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column values as `f64`, skipping non-numeric cells.
    pub fn column_f64(&self, key: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.get(key).and_then(Value::as_f64))
            .collect()
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}

/// Writes CSV (header row, `,`, LF) or a JSON array of row objects.
pub fn write_report<W: Write>(
    report: &ExperimentReport,
    format: OutputFormat,
    out: W,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(&report.columns).map_err(csv_err)?;
            for row in &report.rows {
                w.write_record(row.0.iter().map(|(_, v)| v.to_cell()))
                    .map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &report.rows).map_err(io::Error::other)?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(report: &ExperimentReport, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_report(report, format, BufWriter::new(File::create(p)?)),
        None => write_report(report, format, io::stdout().lock()),
    }
}

/// Parses CSV written by [`write_report`], inferring integer, boolean, real
/// and text cells.
pub fn read_csv(text: &str) -> Result<ExperimentReport> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let columns: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(String::from)
        .collect();
    let mut report = ExperimentReport::new(columns.clone());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let mut row = ReportRow::new();
        for (k, cell) in columns.iter().zip(rec.iter()) {
            row.push(k.clone(), Value::from_cell(cell));
        }
        report.push(row)?;
    }
    Ok(report)
}

/// Parses a JSON array of row objects; column order follows the first row.
pub fn read_json(text: &str) -> Result<ExperimentReport> {
    let bad = |m: &str| Error::Io(io::Error::new(io::ErrorKind::InvalidData, m.to_string()));
    let parsed: serde_json::Value = serde_json::from_str(text).map_err(io::Error::other)?;
    let arr = parsed
        .as_array()
        .ok_or_else(|| bad("expected a JSON array"))?;
    let mut report: Option<ExperimentReport> = None;
    for obj in arr {
        let obj = obj.as_object().ok_or_else(|| bad("expected row objects"))?;
        let mut row = ReportRow::new();
        for (k, v) in obj {
            let value = match v {
                serde_json::Value::Number(num) => match num.as_i64() {
                    Some(i) if !num.is_f64() => Value::Int(i),
                    _ => Value::Real(num.as_f64().ok_or_else(|| bad("bad number"))?),
                },
                serde_json::Value::Bool(b) => Value::Bool(*b),
                serde_json::Value::String(s) => Value::Text(s.clone()),
                _ => return Err(bad("unsupported JSON cell")),
            };
            row.push(k.clone(), value);
        }
        let rep = report.get_or_insert_with(|| {
            ExperimentReport::new(row.keys().map(String::from).collect::<Vec<_>>())
        });
        rep.push(row)?;
    }
    Ok(report.unwrap_or_else(|| ExperimentReport::new(Vec::<String>::new())))
}
