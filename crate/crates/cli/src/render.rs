//! Output rendering. Every command builds one JSON report; text output is a
//! straight formatting of that JSON (never a second computation path), and
//! CSV is an explicit tabular projection with stable column order.

use clap::ValueEnum;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Output {
    pub value: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn new(value: Value, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output {
            value,
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(&self.value).expect("report serialization")
            }
            Format::Csv => {
                let mut out = csv_row(&self.headers);
                for row in &self.rows {
                    out.push('\n');
                    out.push_str(&csv_row(row));
                }
                out
            }
            Format::Text => text_of(&self.value),
        }
    }
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

/// `key: value` lines; compound values inline as JSON. serde_json keeps
/// object keys sorted, so the rendering is deterministic.
fn text_of(value: &Value) -> String {
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

/// Shortest round-trip decimal for table cells.
pub fn num(v: f64) -> String {
    format!("{v}")
}
