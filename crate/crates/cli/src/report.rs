//! Tabular results with CSV and JSON rendering.
//!
//! Numbers are written with 17 significant digits so that every value parses
//! back to the same `f64`. Non-finite numbers never reach the output: the cell
//! becomes empty (CSV) or `null` (JSON) and the failure is listed in `errors`.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// `v` with 17 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_number(text: &str) -> Value {
    // arbitrary_precision keeps the literal digits
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

/// Input parameters echoed the way they were given.
pub fn json_param(v: f64) -> Value {
    json_number(&format!("{v:?}"))
}

#[derive(Debug, Clone)]
pub struct Report {
    pub meta: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(meta: Map<String, Value>, columns: Vec<&'static str>) -> Self {
        Self {
            meta,
            columns,
            rows: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        let row = row
            .into_iter()
            .enumerate()
            .map(|(i, c)| match c {
                Cell::Num(v) if !v.is_finite() => {
                    self.errors
                        .push(format!("row {}: {} is {v}", self.rows.len(), self.columns[i]));
                    Cell::Null
                }
                other => other,
            })
            .collect();
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(v) => fmt_num(*v),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Bool(b) => b.to_string(),
                Cell::Null => String::new(),
            }))?;
        }
        w.flush()
    }

    fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(v) => json_number(&fmt_num(*v)),
                            Cell::Int(i) => Value::from(*i),
                            Cell::Text(s) => Value::from(s.as_str()),
                            Cell::Bool(b) => Value::from(*b),
                            Cell::Null => Value::Null,
                        };
                        (k.to_string(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(self.meta.clone()));
        top.insert("rows".into(), Value::Array(rows));
        top.insert(
            "errors".into(),
            Value::Array(self.errors.iter().map(|e| Value::from(e.as_str())).collect()),
        );
        serde_json::to_writer_pretty(&mut out, &Value::Object(top))?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_num(0.7), "6.9999999999999996e-1");
    }

    #[test]
    fn non_finite_cells_become_errors() {
        let mut r = Report::new(Map::new(), vec!["x", "y"]);
        r.push(vec![Cell::Num(1.0), Cell::Num(f64::NAN)]);
        assert_eq!(r.rows[0][1], Cell::Null);
        assert_eq!(r.errors.len(), 1);
        let mut buf = Vec::new();
        r.write_to(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert!(v["rows"][0]["y"].is_null());
        assert!(!v["rows"].to_string().contains("NaN"));
    }

    #[test]
    fn csv_quotes_text() {
        let mut r = Report::new(Map::new(), vec!["detail"]);
        r.push(vec![Cell::from("a, \"b\"")]);
        let mut buf = Vec::new();
        r.write_to(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "detail\n\"a, \"\"b\"\"\"\n");
    }
}
