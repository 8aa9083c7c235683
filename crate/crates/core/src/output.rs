//! CSV and JSON tables.
//!
//! Numbers are written with 17 significant digits so they read back exactly.
//! Unstable or undefined entries are empty CSV fields and JSON `null`; an
//! infinite transfer coefficient is the literal `inf` (a string in JSON).

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Int(i64),
    Bool(bool),
    Null,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

fn number_text(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Number(v) => number_text(*v),
        Cell::Int(n) => n.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
    }
}

pub fn to_csv(table: &Table) -> String {
    let mut s = table.columns.join(",");
    s.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(cell_text).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Number(v) => {
            Number::from_f64(*v).map_or_else(|| Value::String(number_text(*v)), Value::Number)
        }
        Cell::Int(n) => Value::from(*n),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Null => Value::Null,
    }
}

pub fn to_json(table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .cloned()
                .zip(row.iter().map(cell_json))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

pub fn write_table(table: &Table, format: Format, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(render(table, format).as_bytes())
        .map_err(|e| Error::io(path, e))
}

fn parse_text(s: &str) -> Result<Cell> {
    match s {
        "" => Ok(Cell::Null),
        "true" => Ok(Cell::Bool(true)),
        "false" => Ok(Cell::Bool(false)),
        "inf" => Ok(Cell::Number(f64::INFINITY)),
        "-inf" => Ok(Cell::Number(f64::NEG_INFINITY)),
        "nan" => Ok(Cell::Number(f64::NAN)),
        _ if !s.contains(['.', 'e', 'E']) => s
            .parse()
            .map(Cell::Int)
            .map_err(|_| Error::Config(format!("bad integer field {s:?}"))),
        _ => s
            .parse()
            .map(Cell::Number)
            .map_err(|_| Error::Config(format!("bad numeric field {s:?}"))),
    }
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty CSV".into()))?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(parse_text)
            .collect::<Result<Vec<_>>>()?;
        if row.len() != columns.len() {
            return Err(Error::Config(format!(
                "CSV row {} has {} fields, header has {}",
                n + 1,
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

fn parse_json_cell(v: &Value) -> Result<Cell> {
    match v {
        Value::Null => Ok(Cell::Null),
        Value::Bool(b) => Ok(Cell::Bool(*b)),
        Value::Number(n) => Ok(match n.as_i64() {
            Some(i) if !n.is_f64() => Cell::Int(i),
            _ => Cell::Number(n.as_f64().unwrap_or(f64::NAN)),
        }),
        Value::String(s) => parse_text(s),
        other => Err(Error::Config(format!("unexpected JSON value {other}"))),
    }
}

pub fn parse_json(text: &str) -> Result<Table> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let Value::Array(items) = value else {
        return Err(Error::Config("expected a JSON array of rows".into()));
    };
    let mut table = Table::default();
    for (n, item) in items.iter().enumerate() {
        let Value::Object(obj) = item else {
            return Err(Error::Config(format!("row {n} is not an object")));
        };
        if n == 0 {
            table.columns = obj.keys().cloned().collect();
        }
        let row = table
            .columns
            .iter()
            .map(|c| obj.get(c).map_or(Ok(Cell::Null), parse_json_cell))
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            columns: vec![
                "delta_m".into(),
                "E_ab".into(),
                "T".into(),
                "stability".into(),
                "branch_count".into(),
            ],
            rows: vec![
                vec![
                    Cell::Number(-1.0),
                    Cell::Number(0.14159269791854243),
                    Cell::Number(f64::INFINITY),
                    Cell::Bool(true),
                    Cell::Int(1),
                ],
                vec![
                    Cell::Number(-0.5),
                    Cell::Null,
                    Cell::Null,
                    Cell::Bool(false),
                    Cell::Int(3),
                ],
                vec![
                    Cell::Number(1e-300),
                    Cell::Number(0.0),
                    Cell::Number(0.1 + 0.2),
                    Cell::Bool(true),
                    Cell::Null,
                ],
            ],
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = sample();
        let text = to_csv(&t);
        assert!(!text.contains('\r'));
        assert!(text.starts_with("delta_m,E_ab,T,stability,branch_count\n"));
        assert!(text.contains("-5.0000000000000000e-1,,,false,3"));
        assert_eq!(parse_csv(&text).unwrap(), t);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = sample();
        let text = to_json(&t);
        assert!(text.contains("\"T\": \"inf\""));
        assert!(text.contains("\"E_ab\": null"));
        assert_eq!(parse_json(&text).unwrap(), t);
    }

    #[test]
    fn write_failure_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let target = blocker.join("out.csv");
        let err = write_table(&sample(), Format::Csv, &target).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
