use super::report::{Outcome, Table};
use crate::error::Result;
use crate::identify::{make_weights, realize_identifier, SamplingScheme};
use crate::operators::{KernelOperator, Operator};
use crate::tfcore::{GridSpec, SampledSignal, C64};
use crate::windows::{build_mollifier, build_pou_pair, Band, PouKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NodecayParams {
    pub dt: f64,
    pub t_period: f64,
    pub periods: usize,
    pub delta: f64,
    /// shifts n ∈ [−shift_range, shift_range] in units of T
    pub shift_range: i64,
    pub truncation_radius: f64,
    pub mollifier_delta: f64,
    /// distance past the truncation radius from which decay is required
    pub margin: f64,
    pub min_ratio: f64,
    pub max_tail: f64,
}

impl Default for NodecayParams {
    fn default() -> Self {
        Self {
            dt: 1.0 / 16.0,
            t_period: 1.0,
            periods: 64,
            delta: 0.375,
            shift_range: 20,
            truncation_radius: 8.0,
            mollifier_delta: 0.125,
            margin: 6.0,
            min_ratio: 0.5,
            max_tail: 1e-3,
        }
    }
}

/// κ_n(x, y) = φ(x − nT) r(x − y): a smoothing convolution followed by a
/// band-limited bump centred at nT.
fn shifted_family(grid: GridSpec, phi: &SampledSignal, r: &SampledSignal, n: i64, nt: i64) -> Result<KernelOperator> {
    let phi = phi.normalized();
    let bump: Vec<C64> = (0..grid.n()).map(|x| phi.values[grid.wrap(x as i64 - n * nt)]).collect();
    let r = r.normalized();
    let rows = (0..grid.n())
        .filter(|&t| r.values[t].norm() > 0.0)
        .map(|t| (t, bump.iter().map(|b| b * r.values[t]).collect()))
        .collect();
    KernelOperator::new(grid, rows)
}

pub fn run(p: &NodecayParams, seed: u64) -> Result<Outcome> {
    let grid = GridSpec::for_period(p.t_period, p.dt, 1, p.periods)?;
    let nt = grid.steps("T", p.t_period)?;
    let w = build_pou_pair(PouKind::Linear, p.t_period, 1.0 / p.t_period, p.delta, grid)?;
    let sc = make_weights(&SamplingScheme::geometry(1, p.t_period, 0.0, 0.0, (0.0, 0.0), vec![(0, 0)])?, seed)?;
    let full = realize_identifier(&sc, grid, None, None)?.signal;
    let band = Band::Interval { lo: -0.5 / p.t_period, hi: 0.5 / p.t_period };
    let moll = build_mollifier(p.mollifier_delta, band, 1.0, grid)?;
    let rad = p.truncation_radius;
    let cut = realize_identifier(&sc, grid, Some((-rad, rad)), Some(&moll))?.signal;

    let shifts: Vec<i64> = (-p.shift_range..=p.shift_range).collect();
    let mut pure = Vec::new();
    let mut trunc = Vec::new();
    for &n in &shifts {
        let h = shifted_family(grid, &w.phi, &w.r, n, nt)?;
        pure.push(h.apply(&full)?.norm());
        trunc.push(h.apply(&cut)?.norm());
    }
    let pmax = pure.iter().cloned().fold(0.0, f64::max);
    let pmin = pure.iter().cloned().fold(f64::INFINITY, f64::min);
    let tmax = trunc.iter().cloned().fold(0.0, f64::max);
    let mut t = Table::new("nodecay", &["shift", "pure_norm", "truncated_norm", "truncated_ratio"]);
    let mut tail: f64 = 0.0;
    for ((&n, &a), &b) in shifts.iter().zip(&pure).zip(&trunc) {
        let ratio = b / tmax;
        if (n as f64 * p.t_period).abs() >= rad + p.margin {
            tail = tail.max(ratio);
        }
        t.push(vec![(n as f64 * p.t_period).into(), a.into(), b.into(), ratio.into()]);
    }
    let mut out = Outcome::new(t.clone());
    out.plots.push(Table { name: "norm_vs_shift".into(), ..t });
    out.stat("pure_min_over_max", pmin / pmax);
    out.stat("truncated_tail", tail);
    out.check("no_decay", pmin / pmax >= p.min_ratio, format!("min/max = {:.4} ≥ {}", pmin / pmax, p.min_ratio));
    out.check(
        "truncated_decay",
        tail <= p.max_tail,
        format!("max ratio for |n| ≥ {} is {tail:.3e} ≤ {:.1e}", rad + p.margin, p.max_tail),
    );
    Ok(out)
}
