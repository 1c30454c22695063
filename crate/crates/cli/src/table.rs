//! The tabular output record and its CSV / JSON encodings.
//!
//! Both encodings round-trip exactly: CSV numbers carry 17 significant
//! digits and JSON numbers use the shortest representation that parses
//! back to the same `f64`. Missing values are `nan` in CSV and `null` in
//! JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "unknown format {other:?} (expected csv or json)"
            ))),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Labeled numeric columns plus an ordered metadata echo. Keyed tables
/// (the check suite) carry one text key per row in a leading column.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub meta: Vec<(String, String)>,
    pub key_label: Option<String>,
    pub keys: Vec<String>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CurveTable {
    pub fn new(labels: Vec<String>) -> Self {
        Self {
            meta: Vec::new(),
            key_label: None,
            keys: Vec::new(),
            labels,
            rows: Vec::new(),
        }
    }

    pub fn keyed(key_label: &str, labels: Vec<String>) -> Self {
        Self {
            key_label: Some(key_label.to_string()),
            ..Self::new(labels)
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace(['\n', '\r'], " ");
        self.meta.push((key.to_string(), value));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.labels.len());
        self.rows.push(row);
    }

    pub fn push_keyed_row(&mut self, key: impl Into<String>, row: Vec<f64>) {
        self.keys.push(key.into());
        self.push_row(row);
    }

    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let j = self.labels.iter().position(|l| l == label)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, CliError> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        let mut header: Vec<&str> = Vec::new();
        if let Some(k) = &self.key_label {
            header.push(k);
        }
        header.extend(self.labels.iter().map(String::as_str));
        out.push_str(&header.join(","));
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = Vec::with_capacity(row.len() + 1);
            if self.key_label.is_some() {
                cells.push(self.keys[i].clone());
            }
            cells.extend(row.iter().map(|&v| csv_number(v)));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut meta = Vec::new();
        let mut lines = text.lines();
        let header = loop {
            let line = lines.next().ok_or_else(|| parse_error("missing header row"))?;
            match line.strip_prefix("# ") {
                Some(entry) => {
                    let (k, v) = entry.split_once('=').ok_or_else(|| parse_error("bad metadata line"))?;
                    meta.push((k.to_string(), v.to_string()));
                }
                None => break line,
            }
        };
        let mut labels: Vec<String> = header.split(',').map(str::to_string).collect();
        let key_label = (labels.first().map(String::as_str) == Some("check")).then(|| labels.remove(0));
        let mut table = CurveTable {
            meta,
            key_label,
            ..CurveTable::new(labels)
        };
        for line in lines.filter(|l| !l.is_empty()) {
            let mut cells = line.split(',');
            if table.key_label.is_some() {
                table.keys.push(cells.next().unwrap_or_default().to_string());
            }
            let row = cells
                .map(|c| c.parse::<f64>().map_err(|_| parse_error(&format!("bad number {c:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != table.labels.len() {
                return Err(parse_error("row width does not match header"));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|&v| json_number(v)).collect()))
            .collect();
        let mut obj = Map::new();
        obj.insert("meta".into(), Value::Object(meta));
        if let Some(k) = &self.key_label {
            obj.insert("key_label".into(), Value::String(k.clone()));
            obj.insert("keys".into(), self.keys.iter().cloned().map(Value::String).collect());
        }
        obj.insert(
            "labels".into(),
            self.labels.iter().cloned().map(Value::String).collect(),
        );
        obj.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("table serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| parse_error(&e.to_string()))?;
        let strings = |v: Option<&Value>| -> Result<Vec<String>, CliError> {
            v.and_then(Value::as_array)
                .ok_or_else(|| parse_error("expected an array of strings"))?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| parse_error("expected a string"))
                })
                .collect()
        };
        let meta = value
            .get("meta")
            .and_then(Value::as_object)
            .ok_or_else(|| parse_error("missing meta"))?
            .iter()
            .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
            .collect();
        let labels = strings(value.get("labels"))?;
        let key_label = value.get("key_label").and_then(Value::as_str).map(str::to_string);
        let keys = if key_label.is_some() {
            strings(value.get("keys"))?
        } else {
            Vec::new()
        };
        let rows = value
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_error("missing rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| parse_error("row is not an array"))?
                    .iter()
                    .map(|c| match c {
                        Value::Null => Ok(f64::NAN),
                        other => other.as_f64().ok_or_else(|| parse_error("cell is not a number")),
                    })
                    .collect::<Result<Vec<f64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CurveTable {
            meta,
            key_label,
            keys,
            labels,
            rows,
        })
    }
}

fn parse_error(msg: &str) -> CliError {
    CliError::Config(format!("cannot read table: {msg}"))
}

/// Seventeen significant digits, `nan` for missing values.
fn csv_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}
