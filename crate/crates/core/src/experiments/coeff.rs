use super::common::{fmt_list, strictly_decreasing};
use super::general::{setup, CoverCase};
use super::report::{Outcome, Table};
use crate::error::{Error, Result};
use crate::recover::{discrete_coefficients, recover_kernel_general, symbol_from_coefficients};
use crate::operators::Operator;
use crate::tfcore::{Axis, GridSpec, PlaneArray, Semantics};
use crate::windows::{build_pou_pair_split, PouKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoeffParams {
    pub case: CoverCase,
    pub dt: f64,
    pub knot: f64,
    pub l_max: usize,
    /// LT/β₁ defaults to T
    pub beta1: Option<f64>,
    pub beta2: f64,
    /// symbol rows compared per grid
    pub rows: usize,
    pub refinements: usize,
    pub max_error: f64,
    pub max_beta_gap: f64,
    pub max_route_gap: f64,
}

impl Default for CoeffParams {
    fn default() -> Self {
        Self {
            case: CoverCase::three_blocks(),
            dt: 1.0 / 32.0,
            knot: 1.0 / 16.0,
            l_max: 7,
            beta1: None,
            beta2: 2.0,
            rows: 48,
            refinements: 1,
            max_error: 1e-2,
            max_beta_gap: 1e-8,
            max_route_gap: 1e-6,
        }
    }
}

// evenly spaced rows shared by every refinement of `base`
fn rows_on(grid: GridSpec, base: GridSpec, count: usize) -> Result<Vec<Axis>> {
    let stride = base.n() / count.clamp(1, base.n());
    let f = grid.n() / base.n();
    Ok((0..count.min(base.n())).map(|i| Axis::span(grid, (i * stride * f) as i64, 1)).collect())
}

fn rel_linf(a: &[PlaneArray], b: &[PlaneArray]) -> Result<f64> {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        if !x.same_layout(y) {
            return Err(Error::GridMismatch("symbol rows differ in layout".into()));
        }
        num = x.values.iter().zip(&y.values).map(|(u, v)| (u - v).norm()).fold(num, f64::max);
        den = den.max(y.max_abs());
    }
    Ok(num / den.max(f64::MIN_POSITIVE))
}

pub fn run(p: &CoeffParams, seed: u64) -> Result<Outcome> {
    let s = setup(&p.case, p.dt, p.knot, p.l_max, seed)?;
    let sc = &s.scheme;
    let beta1 = p.beta1.unwrap_or(sc.l as f64);
    let base = s.cover.grid;
    let mut table = Table::new("coeff_recover", &["level", "dt", "n", "beta2", "coefficients", "symbol_error"]);
    let mut errs = Vec::new();
    let mut beta_gap = f64::NAN;
    let mut route_gap = f64::NAN;
    for level in 0..=p.refinements {
        let grid = base.refined(1 << level);
        let w = build_pou_pair_split(PouKind::Quadratic, sc.t_period, sc.omega, sc.delta_t, sc.delta_nu, grid)?;
        let response = s.op.train_response(sc, grid)?;
        let tab = discrete_coefficients(&response, sc, &w, beta1, p.beta2)?;
        let axes = rows_on(grid, base, p.rows)?;
        let truth: Vec<PlaneArray> = axes.iter().map(|a| s.op.symbol_rows(*a)).collect::<Result<_>>()?;
        let est: Vec<PlaneArray> =
            axes.iter().map(|a| symbol_from_coefficients(&tab, None, *a)).collect::<Result<_>>()?;
        let e = rel_linf(&est, &truth)?;
        table.push(vec![level.into(), grid.dt.into(), grid.n().into(), p.beta2.into(), tab.values.len().into(), e.into()]);
        errs.push(e);
        if level == 0 {
            let tab2 = discrete_coefficients(&response, sc, &w, beta1, 2.0 * p.beta2)?;
            let est2: Vec<PlaneArray> =
                axes.iter().map(|a| symbol_from_coefficients(&tab2, None, *a)).collect::<Result<_>>()?;
            beta_gap = rel_linf(&est2, &est)?;
            table.push(vec![
                level.into(),
                grid.dt.into(),
                grid.n().into(),
                (2.0 * p.beta2).into(),
                tab2.values.len().into(),
                rel_linf(&est2, &truth)?.into(),
            ]);
            // the kernel route on the same response
            let wl = build_pou_pair_split(PouKind::Linear, sc.t_period, sc.omega, sc.delta_t, sc.delta_nu, grid)?;
            let k = recover_kernel_general(&response, sc, &wl)?;
            let mut kr: Vec<PlaneArray> = axes
                .iter()
                .map(|a| PlaneArray::zeros(*a, Axis::full(grid.dual()), Semantics::Symbol))
                .collect::<Result<_>>()?;
            k.for_each_symbol_row(&mut |x, row| {
                if let Some(r) = kr.iter_mut().find(|r| r.x.index(0) == x) {
                    r.values.copy_from_slice(row);
                }
            })?;
            route_gap = rel_linf(&kr, &est)?;
        }
    }
    let mut out = Outcome::new(table.clone());
    out.plots.push(Table { name: "error_vs_dt".into(), ..table });
    out.stat("l", sc.l as f64);
    out.stat("beta1", beta1);
    out.stat("error_base", errs[0]);
    out.stat("error_finest", *errs.last().unwrap());
    out.stat("beta_doubling_gap", beta_gap);
    out.stat("route_gap", route_gap);
    out.check("base_error", errs[0] <= p.max_error, format!("{:.3e} ≤ {:.1e}", errs[0], p.max_error));
    out.check("decreasing", strictly_decreasing(&errs), format!("[{}]", fmt_list(&errs)));
    out.check("beta_doubling", beta_gap <= p.max_beta_gap, format!("{beta_gap:.3e} ≤ {:.1e}", p.max_beta_gap));
    out.check("route_agreement", route_gap <= p.max_route_gap, format!("{route_gap:.3e} ≤ {:.1e}", p.max_route_gap));
    Ok(out)
}
