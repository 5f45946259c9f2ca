use super::common::{action_error, fmt_list, probes, spline_operator, ProbeParams, RectSpec};
use super::report::{Outcome, Table};
use crate::error::Result;
use crate::identify::{make_weights, SamplingScheme};
use crate::recover::recover_kernel_rect;
use crate::reference::Block;
use crate::tfcore::GridSpec;
use crate::windows::build_lowpass;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RectParams {
    pub dt: f64,
    pub t_period: f64,
    pub periods: usize,
    pub region: RectSpec,
    pub knot: f64,
    pub probes: ProbeParams,
    pub refinements: usize,
    pub max_error: f64,
    pub min_ratio: f64,
}

impl Default for RectParams {
    fn default() -> Self {
        Self {
            dt: 1.0 / 64.0,
            t_period: 1.0,
            periods: 16,
            region: [0.0, 1.0, -0.45, 0.45],
            knot: 0.125,
            probes: ProbeParams::default(),
            refinements: 1,
            max_error: 1e-3,
            min_ratio: 2.0,
        }
    }
}

pub fn run(p: &RectParams, seed: u64) -> Result<Outcome> {
    let base = GridSpec::for_period(p.t_period, p.dt, 1, p.periods)?;
    let [t0, t1, g0, g1] = p.region;
    let op = spline_operator(&[Block { t0, t1, g0, g1 }], p.knot, base.duration(), seed)?;
    let scheme = SamplingScheme::geometry(1, p.t_period, 0.0, 0.0, (0.0, 0.0), vec![(0, 0)])?;
    let scheme = make_weights(&scheme, seed)?;
    let tests = probes(&p.probes, base.duration(), seed);
    let band = g0.abs().max(g1.abs());

    let mut table = Table::new("recover_rect", &["level", "dt", "n", "action_error"]);
    let mut errs = Vec::new();
    for level in 0..=p.refinements {
        let grid = base.refined(1 << level);
        let lp = build_lowpass(grid, p.t_period, band, 0.5 / p.t_period)?;
        let response = op.train_response(&scheme, grid)?;
        let k = recover_kernel_rect(&response, p.t_period, &lp)?;
        let e = action_error(&k, &op, &tests, grid)?;
        table.push(vec![level.into(), grid.dt.into(), grid.n().into(), e.into()]);
        errs.push(e);
    }
    let mut out = Outcome::new(table.clone());
    out.plots.push(Table { name: "error_vs_dt".into(), ..table });
    out.stat("max_action_error", errs[0]);
    out.stat("error_finest", *errs.last().unwrap());
    out.check("base_error", errs[0] <= p.max_error, format!("{:.3e} ≤ {:.1e}", errs[0], p.max_error));
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    if let Some(worst) = ratios.iter().cloned().reduce(f64::min) {
        out.stat("worst_ratio", worst);
    }
    out.check(
        "refinement_ratio",
        ratios.iter().all(|&r| r >= p.min_ratio),
        format!("errors [{}], ratios [{}]", fmt_list(&errs), fmt_list(&ratios)),
    );
    Ok(out)
}
