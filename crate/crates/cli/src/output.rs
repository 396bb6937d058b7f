//! Rendering of records and tables in the supported formats.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `key = value` lines for records, aligned columns for tables.
    #[default]
    Text,
    Csv,
    Markdown,
    #[value(name = "json-like", alias = "json")]
    Json,
}

/// Ordered fields of one result.
#[derive(Clone, Debug, Default)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn new() -> Record {
        Record(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    fn to_json(&self) -> Value {
        Value::Object(self.0.iter().cloned().collect::<Map<_, _>>())
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Array(xs) if xs.is_empty() => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(plain).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn record(r: &Record, format: Format) -> String {
    match format {
        Format::Text => r.0.iter().map(|(k, v)| format!("{k} = {}\n", plain(v))).collect(),
        Format::Json => serde_json::to_string_pretty(&r.to_json()).expect("json") + "\n",
        _ => table(std::slice::from_ref(r), format),
    }
}

/// All records are expected to share the keys of the first.
pub fn table(rows: &[Record], format: Format) -> String {
    let Some(first) = rows.first() else { return String::new() };
    let headers: Vec<&str> = first.0.iter().map(|(k, _)| k.as_str()).collect();
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.0.iter().map(|(_, v)| plain(v)).collect()).collect();
    let mut out = String::new();
    match format {
        Format::Json => {
            let arr = Value::Array(rows.iter().map(Record::to_json).collect());
            out = serde_json::to_string_pretty(&arr).expect("json") + "\n";
        }
        Format::Csv => {
            out += &headers.iter().map(|h| csv_cell(h)).collect::<Vec<_>>().join(",");
            out.push('\n');
            for row in &cells {
                out += &row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",");
                out.push('\n');
            }
        }
        Format::Markdown => {
            out += &format!("| {} |\n", headers.join(" | "));
            out += &format!("|{}\n", "---|".repeat(headers.len()));
            for row in &cells {
                out += &format!("| {} |\n", row.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "));
            }
        }
        Format::Text => {
            let widths: Vec<usize> = (0..headers.len())
                .map(|j| cells.iter().map(|r| r[j].len()).chain([headers[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |row: Vec<&str>| {
                let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out += &line(headers.clone());
            for row in &cells {
                out += &line(row.iter().map(String::as_str).collect());
            }
        }
    }
    out
}
