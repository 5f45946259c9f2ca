use super::common::{action_error, fmt_list, probes, region, snapped_blocks, spline_operator, strictly_decreasing, ProbeParams, RectSpec};
use super::report::{Outcome, Table};
use crate::error::Result;
use crate::identify::{find_cover, make_weights, CoverOptions, CoverResult, SamplingScheme};
use crate::recover::recover_kernel_general;
use crate::reference::SplineOperator;
use crate::tfcore::GridSpec;
use crate::windows::{build_pou_pair_split, PouKind};
use serde::{Deserialize, Serialize};

/// Support region given as rectangles on a circle of length `duration`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverCase {
    pub name: String,
    pub t_period: f64,
    pub duration: f64,
    pub rects: Vec<RectSpec>,
}

impl CoverCase {
    pub fn two_blocks() -> Self {
        Self {
            name: "two-blocks".into(),
            t_period: 1.0,
            duration: 64.0,
            rects: vec![[0.05, 0.95, 0.02, 0.31], [1.05, 1.95, -0.31, -0.02]],
        }
    }

    /// Blocks inside cells (0,0), (1,−1), (−1,0) of the T = 1, Ω = 1/3 tiling.
    pub fn three_blocks() -> Self {
        Self {
            name: "three-blocks".into(),
            t_period: 1.0,
            duration: 72.0,
            rects: vec![[0.05, 0.95, -0.15, 0.15], [1.05, 1.95, -0.48, -0.19], [-0.95, -0.05, -0.15, 0.15]],
        }
    }
}

/// Cover, weights and a random continuous operator inside the region.
pub(crate) struct Setup {
    pub cover: CoverResult,
    pub scheme: SamplingScheme,
    pub op: SplineOperator,
}

pub(crate) fn setup(case: &CoverCase, dt: f64, knot: f64, l_max: usize, seed: u64) -> Result<Setup> {
    let periods = (case.duration / case.t_period).round() as usize;
    let grid = GridSpec::for_period(case.t_period, dt, 1, periods)?;
    let m = region(grid, &case.rects)?;
    let opts = CoverOptions { l_max, t_candidates: Some(vec![case.t_period]), ..Default::default() };
    let cover = find_cover(&m, &opts)?;
    let scheme = make_weights(&cover.scheme, seed)?;
    let op = spline_operator(&snapped_blocks(&case.rects, knot)?, knot, grid.duration(), seed)?;
    Ok(Setup { cover, scheme, op })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneralParams {
    pub cases: Vec<CoverCase>,
    pub dt: f64,
    pub knot: f64,
    pub l_max: usize,
    pub probes: ProbeParams,
    pub refinements: usize,
    pub max_error: f64,
}

impl Default for GeneralParams {
    fn default() -> Self {
        Self {
            cases: vec![CoverCase::two_blocks(), CoverCase::three_blocks()],
            dt: 1.0 / 32.0,
            knot: 1.0 / 16.0,
            l_max: 7,
            probes: ProbeParams::default(),
            refinements: 2,
            max_error: 1e-2,
        }
    }
}

pub fn run(p: &GeneralParams, seed: u64) -> Result<Outcome> {
    let mut table = Table::new("recover_general", &["case", "l", "level", "dt", "n", "action_error"]);
    let mut verdicts = Vec::new();
    let mut summary = Vec::new();
    for case in &p.cases {
        let s = setup(case, p.dt, p.knot, p.l_max, seed)?;
        let sc = &s.scheme;
        let tests = probes(&p.probes, s.cover.grid.duration(), seed);
        let mut errs = Vec::new();
        for level in 0..=p.refinements {
            let grid = s.cover.grid.refined(1 << level);
            let w = build_pou_pair_split(PouKind::Linear, sc.t_period, sc.omega, sc.delta_t, sc.delta_nu, grid)?;
            let response = s.op.train_response(sc, grid)?;
            let k = recover_kernel_general(&response, sc, &w)?;
            let e = action_error(&k, &s.op, &tests, grid)?;
            table.push(vec![case.name.clone().into(), sc.l.into(), level.into(), grid.dt.into(), grid.n().into(), e.into()]);
            errs.push(e);
        }
        summary.push((format!("{}_l", case.name), sc.l as f64));
        summary.push((format!("{}_error_base", case.name), errs[0]));
        summary.push((format!("{}_error_finest", case.name), *errs.last().unwrap()));
        verdicts.push((
            format!("{}_base_error", case.name),
            errs[0] <= p.max_error,
            format!("{:.3e} ≤ {:.1e}", errs[0], p.max_error),
        ));
        verdicts.push((
            format!("{}_decreasing", case.name),
            strictly_decreasing(&errs),
            format!("[{}]", fmt_list(&errs)),
        ));
    }
    let mut out = Outcome::new(table.clone());
    out.plots.push(Table { name: "error_vs_dt".into(), ..table });
    for (k, v) in summary {
        out.stat(&k, v);
    }
    for (n, pass, d) in verdicts {
        out.check(&n, pass, d);
    }
    Ok(out)
}
