//! Operator files: a JSON envelope with the run-length encoded support and
//! the seed, next to a CSV of η values (`t_index,gamma_index,re,im`).

use super::operator::BandlimitedOperator;
use super::support::SupportRegion;
use crate::error::{Error, Result};
use crate::tfcore::{GridSpec, C64};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub grid: GridSpec,
    pub support_rle: Vec<(usize, Vec<[usize; 2]>)>,
    pub eta_csv: String,
    pub seed: Option<u64>,
}

/// Writes `<stem>.json` and `<stem>_eta.csv` into `dir`; returns the JSON path.
pub fn write_operator(op: &BandlimitedOperator, dir: &Path, stem: &str, seed: Option<u64>) -> Result<PathBuf> {
    let csv_name = format!("{stem}_eta.csv");
    let mut w = csv::Writer::from_path(dir.join(&csv_name))?;
    w.write_record(["t_index", "gamma_index", "re", "im"])?;
    for (&(t, k), v) in op.support.cells.iter().zip(&op.eta) {
        w.write_record([t.to_string(), k.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    w.flush()?;
    let env = OperatorFile { grid: op.support.grid, support_rle: op.support.run_lengths(), eta_csv: csv_name, seed };
    let path = dir.join(format!("{stem}.json"));
    serde_json::to_writer_pretty(File::create(&path)?, &env)?;
    Ok(path)
}

pub fn read_operator(path: &Path) -> Result<(BandlimitedOperator, Option<u64>)> {
    let env: OperatorFile = serde_json::from_reader(File::open(path)?)?;
    let support = SupportRegion::from_run_lengths(env.grid, &env.support_rle);
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut r = csv::Reader::from_path(dir.join(&env.eta_csv))?;
    let mut eta = vec![C64::new(0.0, 0.0); support.len()];
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<&str> { rec.get(i).ok_or_else(|| Error::Parse("short η row".into())) };
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
        let t: usize = field(0)?.parse().map_err(|_| Error::Parse("bad t index".into()))?;
        let k: usize = field(1)?.parse().map_err(|_| Error::Parse("bad γ index".into()))?;
        let p = support.position(t, k).ok_or_else(|| Error::Parse(format!("η entry ({t},{k}) outside the support")))?;
        eta[p] = C64::new(num(field(2)?)?, num(field(3)?)?);
    }
    Ok((BandlimitedOperator::new(support, eta)?, env.seed))
}
