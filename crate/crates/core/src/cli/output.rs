use serde_json::Value;

use crate::error::Result;
use crate::fmt::{float_str, round_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A finished result: a JSON document, or a table destined for CSV.
pub enum Payload {
    Json(Value),
    /// Header plus rows of JSON scalars.
    Table { header: Vec<String>, rows: Vec<Vec<Value>> },
}

impl Payload {
    pub fn render(self, format: Format) -> Result<Vec<u8>> {
        match (self, format) {
            (Payload::Json(mut v), Format::Json) => {
                round_json(&mut v);
                let mut out = serde_json::to_vec_pretty(&v)?;
                out.push(b'\n');
                Ok(out)
            }
            (Payload::Json(v), Format::Csv) => {
                let (header, row) = flatten_object(&v);
                write_csv(&header, &[row])
            }
            (Payload::Table { header, rows }, Format::Csv) => write_csv(&header, &rows),
            (Payload::Table { header, rows }, Format::Json) => {
                let mut v = Value::Array(
                    rows.into_iter()
                        .map(|r| Value::Object(header.iter().cloned().zip(r).collect()))
                        .collect(),
                );
                round_json(&mut v);
                let mut out = serde_json::to_vec_pretty(&v)?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

fn flatten_object(v: &Value) -> (Vec<String>, Vec<Value>) {
    match v {
        Value::Object(map) => map.iter().map(|(k, v)| (k.clone(), v.clone())).unzip(),
        other => (vec!["value".into()], vec![other.clone()]),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => float_str(n.as_f64().unwrap()),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn write_csv(header: &[String], rows: &[Vec<Value>]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(cell))?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}
