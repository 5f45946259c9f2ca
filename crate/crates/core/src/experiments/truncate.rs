use super::common::{fmt_list, strictly_decreasing};
use super::local::{gaussian, CellSetup};
use super::report::{Outcome, Table};
use crate::error::Result;
use crate::identify::realize_identifier;
use crate::operators::{sup_norm_on, Operator};
use crate::recover::recover_kernel_general;
use crate::windows::{build_mollifier, build_pou_pair_split, localization_measure, Band, GaborFrameSpec, LatticeMask, PouKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncateParams {
    pub cell: CellSetup,
    pub mollifier_delta: f64,
    /// truncation radii in units of LT
    pub radii: Vec<f64>,
    pub center: [f64; 2],
    pub width: f64,
    pub tol_factor: f64,
}

impl Default for TruncateParams {
    fn default() -> Self {
        Self {
            cell: CellSetup { periods: 64, ..Default::default() },
            mollifier_delta: 0.125,
            radii: vec![2.0, 4.0, 8.0],
            center: [0.0, 0.0],
            width: 3.0,
            tol_factor: 1e-3,
        }
    }
}

pub fn run(p: &TruncateParams, seed: u64) -> Result<Outcome> {
    let (grid, sc, op) = p.cell.build(seed)?;
    let w = build_pou_pair_split(PouKind::Linear, sc.t_period, sc.omega, sc.delta_t, sc.delta_nu, grid)?;
    let f = gaussian(grid, p.center, p.width)?;
    let hf = op.apply(&f)?;
    let mu = sup_norm_on(&op, &|_, _| true)?.value;
    let lt = sc.l as f64 * sc.t_period;
    let band = Band::Interval { lo: -0.5 / p.width, hi: 0.5 / p.width };
    let moll = build_mollifier(p.mollifier_delta, band, p.tol_factor, grid)?;

    // ε: energy of f outside [−R, R] × band for the largest radius, in a tight frame
    let qw = build_pou_pair_split(PouKind::Quadratic, sc.t_period, sc.omega, sc.delta_t, sc.delta_nu, grid)?;
    let frame = GaborFrameSpec::new(qw.r, sc.t_period / 2.0, sc.omega / 2.0, 1.0)?.normalized_tight(seed)?;
    let rmax = p.radii.iter().cloned().fold(0.0, f64::max) * lt;
    let mask = LatticeMask::for_frame(&frame, |x, _| (x + sc.t_period / 2.0 - p.center[0]).abs() <= rmax)?;
    let eps = 1.0 - localization_measure(&f, &frame, &mask)?;

    let mut t = Table::new("truncate_sweep", &["radius", "deltas", "error", "error_over_mu"]);
    let mut errs = Vec::new();
    for &r in &p.radii {
        let half = r * lt;
        let id = realize_identifier(&sc, grid, Some((-half, half)), Some(&moll))?;
        let response = op.apply(&id.signal)?;
        let k = recover_kernel_general(&response, &sc, &w)?;
        let e = k.apply(&f)?.sub(&hf)?.norm() / f.norm();
        t.push(vec![half.into(), id.positions.len().into(), e.into(), (e / mu).into()]);
        errs.push(e);
    }
    let last = *errs.last().unwrap_or(&f64::NAN);
    let mut out = Outcome::new(t.clone());
    out.plots.push(Table { name: "error_vs_radius".into(), ..t });
    out.stat("mu", mu);
    out.stat("epsilon", eps);
    out.stat("mollifier_flatness", moll.flatness_eps);
    out.stat("error_largest_radius", last);
    out.check("decreasing", strictly_decreasing(&errs), format!("[{}]", fmt_list(&errs)));
    out.check(
        "largest_radius",
        last <= p.tol_factor * mu,
        format!("{last:.3e} ≤ {:.1e}·μ·‖f‖ = {:.3e}", p.tol_factor, p.tol_factor * mu),
    );
    Ok(out)
}
