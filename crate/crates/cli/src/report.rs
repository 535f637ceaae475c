//! Tabular reports written as CSV or as a single JSON document.
//!
//! CSV layout: `#`-prefixed header lines echoing the command, its
//! configuration, notes and summary values, then one header row and the data
//! rows. Floats are written with 17 significant digits so every value reads
//! back to the same double. Lines end in `\n`.

use std::fmt::Write as _;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Uint(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Uint(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Uint(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `{:.16e}`: 17 significant digits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Uint(v) => v.to_string(),
            Cell::Text(s) => csv_field(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Uint(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }

    fn echo(&self) -> String {
        match self {
            Cell::Text(s) => s.replace('\n', " "),
            other => other.csv(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub config: Vec<(String, Cell)>,
    pub notes: Vec<String>,
    pub summary: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Set when the report is complete but some value missed its tolerance
    /// or hit a cap; the run then exits with status 2.
    pub flag: Option<String>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Report::default()
        }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.config.push((key.to_string(), value.into()));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.summary.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Keeps the first flag raised.
    pub fn raise(&mut self, reason: impl Into<String>) {
        self.flag.get_or_insert_with(|| reason.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command={}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k}={}", v.echo());
        }
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# result.{k}={}", v.echo());
        }
        if let Some(f) = &self.flag {
            let _ = writeln!(out, "# flagged: {f}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let pairs = |items: &[(String, Cell)]| {
            Value::Object(items.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
        };
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command.as_str()));
        doc.insert("config".into(), pairs(&self.config));
        doc.insert("notes".into(), Value::from(self.notes.clone()));
        doc.insert("summary".into(), pairs(&self.summary));
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("flagged".into(), self.flag.clone().map_or(Value::Null, Value::from));
        Value::Object(doc)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
            s.push('\n');
            s
        } else {
            self.to_csv()
        }
    }
}
