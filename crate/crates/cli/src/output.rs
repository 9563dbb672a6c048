//! Tabular output. CSV carries a header row; JSON is `{"meta": {...},
//! "rows": [{column: value, ...}, ...]}`. Floats use 17 significant digits
//! and non-finite values become `null` in JSON.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

/// 17 significant digits in scientific notation.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => {
                // arbitrary_precision keeps the digits exactly as formatted
                Value::Number(fmt_float(*v).parse::<Number>().expect("formatted float is valid JSON"))
            }
            Cell::Num(_) => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::to_json))
                        .collect(),
                )
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.to_json())?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn write(&self, format: Format, path: Option<&Path>) -> std::io::Result<()> {
        let bytes = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, bytes),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes)?;
                out.flush()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = fmt_float(1.0 / 3.0);
        assert_eq!(s, "3.3333333333333331e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn json_numbers_round_trip_and_nan_is_null() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Num(0.1), Cell::Num(f64::NAN)]);
        let v = t.to_json();
        let row = &v["rows"][0];
        assert_eq!(row["a"].as_f64().unwrap(), 0.1);
        assert!(row["b"].is_null());
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn csv_has_header_and_quotes_text() {
        let mut t = Table::new(&["name", "v"]);
        t.push(vec![Cell::from("a,b"), Cell::from(2.0)]);
        let s = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(s, "name,v\n\"a,b\",2.0000000000000000e0\n");
    }
}
