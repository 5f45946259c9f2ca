use super::common::{region, RectSpec};
use super::report::{Outcome, Table};
use crate::error::Result;
use crate::operators::{operator_norm_estimate, random_opw, sup_norm_on, DEFAULT_SMOOTHING};
use crate::tfcore::GridSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormParams {
    pub dt: f64,
    pub t_period: f64,
    pub periods: usize,
    pub region: RectSpec,
    pub operators: usize,
    pub max_spread: f64,
}

impl Default for NormParams {
    fn default() -> Self {
        Self { dt: 1.0 / 16.0, t_period: 1.0, periods: 16, region: [0.0, 0.75, -0.375, 0.375], operators: 50, max_spread: 100.0 }
    }
}

pub fn run(p: &NormParams, seed: u64) -> Result<Outcome> {
    let grid = GridSpec::for_period(p.t_period, p.dt, 1, p.periods)?;
    let m = region(grid, &[p.region])?;
    let rows: Vec<Result<(f64, f64)>> = (0..p.operators as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_mul(7919).wrapping_add(i);
            let op = random_opw(&m, s, DEFAULT_SMOOTHING)?;
            let norm = operator_norm_estimate(&op, s)?.value;
            let sup = sup_norm_on(&op, &|_, _| true)?.value;
            Ok((norm, sup))
        })
        .collect();
    let mut t = Table::new("norm_equiv", &["operator", "operator_norm", "symbol_sup", "ratio"]);
    let mut ratios = Vec::new();
    for (i, r) in rows.into_iter().enumerate() {
        let (norm, sup) = r?;
        t.push(vec![i.into(), norm.into(), sup.into(), (norm / sup).into()]);
        ratios.push(norm / sup);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let mut out = Outcome::new(t.clone());
    out.plots.push(Table { name: "ratios".into(), ..t });
    out.stat("ratio_min", lo);
    out.stat("ratio_max", hi);
    out.stat("spread", hi / lo);
    out.check("sandwich", hi / lo <= p.max_spread, format!("b/a = {:.3} ≤ {}", hi / lo, p.max_spread));
    Ok(out)
}
