//! In-memory result tables with a static column schema, and their CSV form.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{CliError, CliResult};

/// One column: name, unit and a short meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
    pub meaning: &'static str,
}

pub const fn col(name: &'static str, unit: &'static str, meaning: &'static str) -> Column {
    Column { name, unit, meaning }
}

/// How a table is drawn when SVG output is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plot {
    /// One polyline per `y` column against `x`, one series per distinct
    /// value of `group` when given.
    Lines {
        x: &'static str,
        y: &'static [&'static str],
        group: Option<&'static str>,
        log_x: bool,
        log_y: bool,
    },
    /// A closed curve `(x, y)` drawn with equal axes, with a tick wherever
    /// `angle` crosses a multiple of `2π/16`.
    Curve {
        x: &'static str,
        y: &'static str,
        angle: &'static str,
    },
}

/// Schema of one output table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub columns: &'static [Column],
    pub plot: Option<Plot>,
}

impl TableSpec {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(b) => Some(b),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
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

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
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

/// Builds a row from heterogeneous values.
#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => {
        vec![$($crate::table::Cell::from($v)),*]
    };
}

/// Rows under a [`TableSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub spec: &'static TableSpec,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(spec: &'static TableSpec) -> Self {
        Self { spec, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.spec.columns.len(),
            "row width does not match table `{}`",
            self.spec.name
        );
        self.rows.push(row);
    }

    /// Numeric values of a column (non-numeric cells are skipped).
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        match self.spec.column_index(name) {
            Some(k) => self.rows.iter().filter_map(|r| r[k].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn cell(&self, row: usize, name: &str) -> Option<&Cell> {
        let k = self.spec.column_index(name)?;
        self.rows.get(row).map(|r| &r[k])
    }

    /// Rows whose `column` holds the text `value`.
    pub fn filter(&self, column: &str, value: &str) -> Table {
        let k = self.spec.column_index(column);
        Table {
            spec: self.spec,
            rows: self
                .rows
                .iter()
                .filter(|r| k.is_some_and(|k| r[k].as_str() == Some(value)))
                .cloned()
                .collect(),
        }
    }

    /// Comment preamble, a `name [unit]` header row and the rows.
    pub fn write_csv<W: Write>(&self, scenario: &str, mut out: W) -> CliResult<()> {
        let mut pre = String::new();
        writeln!(pre, "# scenario: {scenario}").unwrap();
        writeln!(pre, "# table: {}: {}", self.spec.name, self.spec.description).unwrap();
        for c in self.spec.columns {
            writeln!(pre, "# {} [{}]: {}", c.name, c.unit, c.meaning).unwrap();
        }
        out.write_all(pre.as_bytes())?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.spec.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)))
            .map_err(|e| CliError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Parses a CSV written by [`Table::write_csv`] into its column names
/// (units stripped) and raw string rows.
pub fn read_csv(text: &str) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| CliError::Io(e.to_string()))?
        .iter()
        .map(|h| h.split(" [").next().unwrap_or(h).to_string())
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::Io(e.to_string()))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}
