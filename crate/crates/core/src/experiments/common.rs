use crate::error::{Error, Result};
use crate::operators::{Operator, Rect, SupportRegion};
use crate::reference::{Block, SplineOperator, TrigProbe};
use crate::tfcore::GridSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// [t0, t1, γ0, γ1]
pub type RectSpec = [f64; 4];

pub fn rects(specs: &[RectSpec]) -> Vec<Rect> {
    specs.iter().map(|r| Rect::new(r[0], r[1], r[2], r[3])).collect()
}

pub fn region(grid: GridSpec, specs: &[RectSpec]) -> Result<SupportRegion> {
    let m = SupportRegion::from_rects(grid, &rects(specs));
    m.check_area()?;
    if m.is_empty() {
        return Err(Error::InvalidParameter("support region holds no grid point".into()));
    }
    Ok(m)
}

/// Blocks shrunk to the knot lattice so spline knots sit on every grid
/// used in a refinement study.
pub fn snapped_blocks(specs: &[RectSpec], knot: f64) -> Result<Vec<Block>> {
    specs
        .iter()
        .map(|r| {
            let t0 = (r[0] / knot - 1e-9).ceil() * knot;
            let t1 = (r[1] / knot + 1e-9).floor() * knot;
            if t1 - t0 < 4.0 * knot - 1e-12 {
                return Err(Error::InvalidParameter(format!("block {r:?} is shorter than four knot steps")));
            }
            Ok(Block { t0, t1, g0: r[2], g1: r[3] })
        })
        .collect()
}

/// Random continuous operator on `blocks` with knots spaced exactly `knot`.
pub fn spline_operator(blocks: &[Block], knot: f64, period: f64, seed: u64) -> Result<SplineOperator> {
    let counts: Vec<usize> = blocks.iter().map(|b| ((b.t1 - b.t0) / knot).round() as usize - 3).collect();
    if counts.is_empty() || counts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::InvalidParameter("blocks must be present and of equal length".into()));
    }
    SplineOperator::random(blocks, counts[0], period, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeParams {
    pub count: usize,
    pub terms: usize,
    pub max_freq: f64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        Self { count: 8, terms: 6, max_freq: 2.0 }
    }
}

pub fn probes(p: &ProbeParams, period: f64, seed: u64) -> Vec<TrigProbe> {
    (0..p.count).map(|i| TrigProbe::random(p.terms, p.max_freq, period, seed.wrapping_mul(1000).wrapping_add(i as u64))).collect()
}

/// max over probes of ‖A f − H f‖ / ‖H f‖ against the continuous reference.
pub fn action_error(approx: &dyn Operator, truth: &SplineOperator, probes: &[TrigProbe], grid: GridSpec) -> Result<f64> {
    let errs: Vec<Result<f64>> = probes
        .par_iter()
        .map(|p| {
            let a = approx.apply(&p.sample(grid))?;
            let b = truth.apply_trig(p, grid)?;
            a.rel_err(&b)
        })
        .collect();
    errs.into_iter().try_fold(0.0f64, |m, e| Ok(m.max(e?)))
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}


pub fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}
