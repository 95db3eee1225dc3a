//! Tabular output shared by every subcommand.
//!
//! Both formats embed the resolved run configuration. CSV files carry it in
//! a leading `# config: {...}` comment, followed by a units comment and the
//! header row. Floating-point values are written with 12 significant digits
//! in both formats, so CSV and JSON hold the same numbers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const CONFIG_PREFIX: &str = "# config: ";
pub const UNITS_LINE: &str = "# units: natural logarithms (nats)";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    BigInt(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// Word counts may exceed `u64`.
    pub fn count(s: &str) -> Self {
        s.parse().map_or_else(|_| Cell::BigInt(s.to_string()), Cell::Int)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::BigInt(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => fmt_sig(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::BigInt(s) | Cell::Text(s) => json!(s),
            Cell::Float(x) if x.is_finite() => {
                let rounded: f64 = fmt_sig(*x).parse().expect("formatted float parses");
                json!(rounded)
            }
            Cell::Float(x) => json!(fmt_sig(*x)),
            Cell::Bool(b) => json!(b),
            Cell::Null => Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, config: &Value) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                writeln!(out, "{CONFIG_PREFIX}{config}").unwrap();
                writeln!(out, "{UNITS_LINE}").unwrap();
                writeln!(out, "{}", self.columns.join(",")).unwrap();
                for row in &self.rows {
                    let fields: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", fields.join(",")).unwrap();
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
                let doc = json!({
                    "config": config,
                    "units": "nats",
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
                s.push('\n');
                s
            }
        }
    }
}

/// Formats `x` with 12 significant digits: fixed notation for exponents in
/// `[-4, 12)`, scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-4..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        sci
    }
}

/// Recovers the embedded configuration and format from a rendered file.
pub fn read_config(contents: &str) -> Option<(Value, Format)> {
    if contents.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(contents).ok()?;
        return Some((doc.get("config")?.clone(), Format::Json));
    }
    let line = contents.lines().find(|l| l.starts_with(CONFIG_PREFIX))?;
    Some((serde_json::from_str(&line[CONFIG_PREFIX.len()..]).ok()?, Format::Csv))
}
