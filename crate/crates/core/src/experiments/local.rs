use super::common::{fmt_list, region, strictly_decreasing, RectSpec};
use super::report::{Outcome, Table};
use crate::error::{Error, Result};
use crate::identify::{make_weights, SamplingScheme};
use crate::operators::{random_opw, sup_norm_on, BandlimitedOperator, Operator, DEFAULT_SMOOTHING};
use crate::recover::{discrete_coefficients, operator_from_coefficients};
use crate::tfcore::{cis, GridSpec, SampledSignal, C64};
use crate::windows::{build_pou_pair_split, GaborFrameSpec, LatticeMask, PouKind};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Single-cell scheme with wide paddings and a random discrete operator
/// inside the shrunk cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CellSetup {
    pub dt: f64,
    pub t_period: f64,
    pub periods: usize,
    pub delta_t: f64,
    pub delta_nu: f64,
    pub region: RectSpec,
}

impl Default for CellSetup {
    fn default() -> Self {
        Self { dt: 1.0 / 32.0, t_period: 1.0, periods: 32, delta_t: 0.25, delta_nu: 0.375, region: [0.25, 0.75, -0.125, 0.125] }
    }
}

impl CellSetup {
    pub(crate) fn build(&self, seed: u64) -> Result<(GridSpec, SamplingScheme, BandlimitedOperator)> {
        let grid = GridSpec::for_period(self.t_period, self.dt, 1, self.periods)?;
        let s = SamplingScheme::geometry(1, self.t_period, self.delta_t, self.delta_nu, (0.0, 0.0), vec![(0, 0)])?;
        let s = make_weights(&s, seed)?;
        let m = region(grid, &[self.region])?;
        let op = random_opw(&m, seed, DEFAULT_SMOOTHING)?;
        Ok((grid, s, op))
    }
}

/// Gaussian time-frequency shift exp(−π((t − x₀)/s)²) e^{2πiξ₀t}, unit norm.
pub fn gaussian(grid: GridSpec, center: [f64; 2], width: f64) -> Result<SampledSignal> {
    let p = grid.duration();
    let f = SampledSignal::from_fn(grid, |t| {
        let u = (t - center[0] + p / 2.0).rem_euclid(p) - p / 2.0;
        cis(TAU * center[1] * t) * (-PI * (u / width).powi(2)).exp()
    });
    let n = f.norm();
    if n == 0.0 {
        return Err(Error::Degenerate("test function vanishes on the grid".into()));
    }
    Ok(f.scaled(C64::new(1.0 / n, 0.0)))
}

fn periodic_dist(a: f64, b: f64, p: f64) -> f64 {
    let d = (a - b).rem_euclid(p);
    d.min(p - d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalParams {
    pub cell: CellSetup,
    pub beta1: f64,
    pub beta2: f64,
    pub center: [f64; 2],
    pub width: f64,
    /// radius of the disc on which f is localized
    pub radius: f64,
    /// erosion margins between that disc and the kept atom set
    pub margins: Vec<f64>,
    pub min_localization: f64,
    pub tol_factor: f64,
}

impl Default for LocalParams {
    fn default() -> Self {
        Self {
            cell: CellSetup::default(),
            beta1: 2.0,
            beta2: 2.0,
            center: [0.0, 0.0],
            width: 1.0,
            radius: 2.0,
            margins: vec![0.5, 1.5, 3.0],
            min_localization: 0.99,
            tol_factor: 1e-2,
        }
    }
}

pub fn run(p: &LocalParams, seed: u64) -> Result<Outcome> {
    let (grid, sc, op) = p.cell.build(seed)?;
    let w = build_pou_pair_split(PouKind::Quadratic, sc.t_period, sc.omega, sc.delta_t, sc.delta_nu, grid)?;
    let response = op.apply(&crate::identify::realize_identifier(&sc, grid, None, None)?.signal)?;
    let table = discrete_coefficients(&response, &sc, &w, p.beta1, p.beta2)?;
    let f = gaussian(grid, p.center, p.width)?;
    let hf = op.apply(&f)?;
    let mu = sup_norm_on(&op, &|_, _| true)?.value;
    let (px, pxi) = (grid.duration(), 1.0 / grid.dt);
    let dist = |x: f64, xi: f64| {
        let dx = periodic_dist(x, p.center[0], px);
        let dy = periodic_dist(xi, p.center[1], pxi);
        (dx * dx + dy * dy).sqrt()
    };

    // localization of f on the disc, measured in the tight frame of the window
    let frame = GaborFrameSpec::new(w.r.clone(), table.a_step, table.b_step, 1.0)?.normalized_tight(seed)?;
    let half = sc.t_period / 2.0;
    let disc = LatticeMask::for_frame(&frame, |x, xi| dist(x + half, xi) <= p.radius)?;
    let rho = crate::windows::localization_measure(&f, &frame, &disc)?;

    let mut t = Table::new("local_subset", &["margin", "atoms", "error", "error_over_mu"]);
    let mut errs = Vec::new();
    for &d in &p.margins {
        let keep = move |x: f64, xi: f64| dist(x, xi) <= p.radius + d;
        let sub = operator_from_coefficients(&table, Some(&keep))?;
        let atoms = table.restricted(&keep).support_size();
        let e = sub.apply(&f)?.sub(&hf)?.norm() / f.norm();
        t.push(vec![d.into(), atoms.into(), e.into(), (e / mu).into()]);
        errs.push(e);
    }
    let mut out = Outcome::new(t.clone());
    out.plots.push(Table { name: "error_vs_margin".into(), ..t });
    let last = *errs.last().ok_or_else(|| Error::InvalidParameter("no margins".into()))?;
    out.stat("mu", mu);
    out.stat("localization", rho);
    out.stat("error_largest_margin", last);
    out.check("localized", rho >= p.min_localization, format!("ρ = {rho:.5} ≥ {}", p.min_localization));
    out.check("decreasing", strictly_decreasing(&errs), format!("[{}]", fmt_list(&errs)));
    out.check(
        "largest_margin",
        last <= p.tol_factor * mu,
        format!("{last:.3e} ≤ {:.1e}·μ = {:.3e}", p.tol_factor, p.tol_factor * mu),
    );
    Ok(out)
}
