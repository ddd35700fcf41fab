// SPDX-License-Identifier: Apache-2.0

//! Output records and their JSONL and CSV encodings.
//!
//! A record is an ordered list of named fields. JSONL writes one object per
//! line with keys in record order; CSV writes a header row followed by one
//! row per record, quoted per RFC 4180, with CRLF line ends. Both encodings
//! print floats as `{:.16e}` (17 significant digits), which parses back to
//! the identical `f64`. Non-finite floats become `null` / an empty cell.
//! Every record starts with a `schema` field naming its layout and version.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(u64),
    Float(f64),
    Str(String),
}

impl Value {
    fn same_bits(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Float(a), Value::Float(b)) => a.to_bits() == b.to_bits(),
            (a, b) => a == b,
        }
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

/// Type a field is read back as from CSV, keyed by field name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Bool,
    Int,
    Float,
    Str,
}

fn kind_of(key: &str) -> Kind {
    match key {
        "qubits" | "samples" | "seed" | "threads" | "index" | "count" | "n_a" | "n_b" | "rows"
        | "bins" | "states" => Kind::Int,
        "f_xeb" | "three_sigma" | "theoretical" | "p" | "phase" | "statistic" | "alpha"
        | "critical_value" | "bin_lo" | "bin_hi" | "time_s" => Kind::Float,
        "reject" | "passed" => Kind::Bool,
        _ => Kind::Str,
    }
}

/// One output row: named fields in emission order.
#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(schema: &str) -> Self {
        Record::default().with("schema", schema)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_owned(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn fields(&self) -> &[(String, Value)] {
        &self.fields
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Some(Value::Float(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        match self.get(key) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        }
    }
}

impl PartialEq for Record {
    /// Field-wise equality; floats compare by bit pattern.
    fn eq(&self, other: &Self) -> bool {
        self.fields.len() == other.fields.len()
            && self
                .fields
                .iter()
                .zip(&other.fields)
                .all(|((ka, va), (kb, vb))| ka == kb && va.same_bits(vb))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        }
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_value(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => out.push_str(&i.to_string()),
        Value::Float(f) if f.is_finite() => out.push_str(&format_float(*f)),
        Value::Float(_) => out.push_str("null"),
        Value::Str(s) => out.push_str(&serde_json::Value::from(s.as_str()).to_string()),
    }
}

/// JSON object text of a record, without a line terminator.
pub fn to_json_line(record: &Record) -> String {
    let mut line = String::from("{");
    for (i, (key, value)) in record.fields.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(&serde_json::Value::from(key.as_str()).to_string());
        line.push(':');
        json_value(&mut line, value);
    }
    line.push('}');
    line
}

fn csv_cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Float(f) if f.is_finite() => format_float(*f),
        Value::Float(_) => String::new(),
        Value::Str(s) => s.clone(),
    }
}

/// Streams homogeneous records in one format.
pub struct RecordWriter<W: Write> {
    format: Format,
    columns: Vec<String>,
    jsonl: Option<W>,
    csv: Option<csv::Writer<W>>,
}

impl<W: Write> RecordWriter<W> {
    /// Starts a stream whose records all have exactly `columns` as keys.
    /// CSV writes its header immediately.
    pub fn new(out: W, format: Format, columns: &[&str]) -> Result<Self> {
        let columns: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        match format {
            Format::Jsonl => Ok(RecordWriter {
                format,
                columns,
                jsonl: Some(out),
                csv: None,
            }),
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::CRLF)
                    .from_writer(out);
                w.write_record(&columns)?;
                Ok(RecordWriter {
                    format,
                    columns,
                    jsonl: None,
                    csv: Some(w),
                })
            }
        }
    }

    pub fn write(&mut self, record: &Record) -> Result<()> {
        if !record.keys().eq(self.columns.iter().map(String::as_str)) {
            return Err(Error::InvalidArgument(format!(
                "record keys {:?} do not match columns {:?}",
                record.keys().collect::<Vec<_>>(),
                self.columns
            )));
        }
        match self.format {
            Format::Jsonl => {
                let out = self.jsonl.as_mut().expect("jsonl writer");
                writeln!(out, "{}", to_json_line(record))?;
            }
            Format::Csv => {
                let w = self.csv.as_mut().expect("csv writer");
                w.write_record(record.fields.iter().map(|(_, v)| csv_cell(v)))?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<W> {
        match (self.jsonl, self.csv) {
            (Some(mut out), _) => {
                out.flush()?;
                Ok(out)
            }
            (None, Some(w)) => w.into_inner().map_err(|e| Error::Io(e.into_error())),
            (None, None) => unreachable!("writer has one backend"),
        }
    }
}

/// Writes `records` with the given column layout.
pub fn emit_records<W: Write>(
    columns: &[&str],
    records: &[Record],
    format: Format,
    out: W,
) -> Result<W> {
    let mut writer = RecordWriter::new(out, format, columns)?;
    for r in records {
        writer.write(r)?;
    }
    writer.finish()
}

fn from_json(value: serde_json::Value) -> Result<Value> {
    use serde_json::Value as J;
    Ok(match value {
        J::Null => Value::Null,
        J::Bool(b) => Value::Bool(b),
        J::Number(n) => match n.as_u64() {
            Some(i) => Value::Int(i),
            None => Value::Float(
                n.as_f64()
                    .ok_or_else(|| Error::Parse(format!("unrepresentable number {n}")))?,
            ),
        },
        J::String(s) => Value::Str(s),
        other => return Err(Error::Parse(format!("unsupported JSON value {other}"))),
    })
}

/// Parses one JSONL line, keeping key order.
pub fn parse_json_line(line: &str) -> Result<Record> {
    let obj: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
    let mut record = Record::default();
    for (k, v) in obj {
        record.fields.push((k, from_json(v)?));
    }
    Ok(record)
}

fn parse_cell(key: &str, cell: &str) -> Result<Value> {
    let bad = || Error::Parse(format!("field {key}: cannot parse {cell:?}"));
    if cell.is_empty() && kind_of(key) != Kind::Str {
        return Ok(Value::Null);
    }
    Ok(match kind_of(key) {
        Kind::Int => Value::Int(cell.parse().map_err(|_| bad())?),
        Kind::Float => Value::Float(cell.parse().map_err(|_| bad())?),
        Kind::Bool => Value::Bool(cell.parse().map_err(|_| bad())?),
        Kind::Str => Value::Str(cell.to_owned()),
    })
}

/// Parses records written by [`RecordWriter`].
pub fn parse_records<R: BufRead>(input: R, format: Format) -> Result<Vec<Record>> {
    match format {
        Format::Jsonl => input
            .lines()
            .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
            .map(|l| parse_json_line(&l?))
            .collect(),
        Format::Csv => {
            let mut reader = csv::Reader::from_reader(input);
            let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
            let mut records = Vec::new();
            for row in reader.records() {
                let row = row?;
                let mut record = Record::default();
                for (key, cell) in header.iter().zip(row.iter()) {
                    record.fields.push((key.clone(), parse_cell(key, cell)?));
                }
                records.push(record);
            }
            Ok(records)
        }
    }
}
