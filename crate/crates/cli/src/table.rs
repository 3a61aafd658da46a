//! Result tables and their CSV form.

use std::fmt::{self, Write as _};

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // Shortest representation that round-trips.
            Cell::Num(x) => write!(f, "{x:?}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// Empty when dimensionless.
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
    /// Extra `# key: value` lines after the provenance block.
    notes: Vec<(String, String)>,
}

impl ResultTable {
    /// `columns` holds `(name, unit)` pairs.
    pub fn new(columns: &[(&str, &str)]) -> Self {
        let columns = columns.iter().map(|(n, u)| Column { name: n.to_string(), unit: u.to_string() }).collect();
        Self { columns, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Panics if the row width differs from the schema.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the column schema");
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl fmt::Display) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    /// CSV text with a `#`-prefixed provenance header.
    pub fn to_csv(&self, cfg: &ExperimentConfig) -> String {
        let config = cfg.to_toml();
        let mut out = String::new();
        writeln!(out, "# coco {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(out, "# kind: {}", cfg.kind().name()).unwrap();
        writeln!(out, "# seed: {}", cfg.seed).unwrap();
        writeln!(out, "# config-sha256: {}", config_hash(&config)).unwrap();
        for line in config.lines() {
            writeln!(out, "{}", format!("# config: {line}").trim_end()).unwrap();
        }
        let units: Vec<String> =
            self.columns.iter().filter(|c| !c.unit.is_empty()).map(|c| format!("{}={}", c.name, c.unit)).collect();
        if !units.is_empty() {
            writeln!(out, "# units: {}", units.join(", ")).unwrap();
        }
        for (k, v) in &self.notes {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        writeln!(out, "{}", names.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }
}

pub fn config_hash(config_text: &str) -> String {
    hex::encode(Sha256::digest(config_text.as_bytes()))
}

/// Recovers the canonical configuration text from a CSV header.
pub fn embedded_config(csv: &str) -> String {
    csv.lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.strip_prefix("# config:"))
        .map(|l| l.strip_prefix(' ').unwrap_or(l))
        .fold(String::new(), |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_print_round_trip() {
        assert_eq!(Cell::from(0.1).to_string(), "0.1");
        assert_eq!(Cell::from(1.0).to_string(), "1.0");
        assert_eq!(Cell::from(1e-300).to_string(), "1e-300");
        let x = 2.0f64.sqrt();
        assert_eq!(Cell::from(x).to_string().parse::<f64>().unwrap(), x);
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_are_refused() {
        let mut t = ResultTable::new(&[("a", ""), ("b", "")]);
        t.push(vec![Cell::Int(1)]);
    }
}
