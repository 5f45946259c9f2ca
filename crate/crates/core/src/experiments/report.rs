use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Num(v as f64)
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

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v:e}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// Column-named table; the first column of a plot table is its x axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.to_string(), pass, detail }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config_hash: String,
    pub experiment: String,
    pub config: serde_json::Value,
    pub metrics: Table,
    pub plots: Vec<Table>,
    pub summary: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
    pub error: Option<String>,
    pub timing_ms: f64,
}

impl Report {
    /// report.json, metrics.csv and one plot_<name>.csv per plot table.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)?)?;
        self.metrics.write_csv(&dir.join("metrics.csv"))?;
        for p in &self.plots {
            p.write_csv(&dir.join(format!("plot_{}.csv", p.name)))?;
        }
        Ok(())
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

/// 64-bit FNV-1a, hex encoded.
pub fn fnv_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Output of one experiment before it is wrapped into a [`Report`].
#[derive(Debug, Clone)]
pub struct Outcome {
    pub metrics: Table,
    pub plots: Vec<Table>,
    pub summary: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
}

impl Outcome {
    pub fn new(metrics: Table) -> Self {
        Self { metrics, plots: Vec::new(), summary: BTreeMap::new(), verdicts: Vec::new() }
    }

    pub fn stat(&mut self, key: &str, v: f64) {
        self.summary.insert(key.to_string(), v);
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.verdicts.push(Verdict::new(name, pass, detail));
    }
}
