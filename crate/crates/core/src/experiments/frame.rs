use super::report::{Outcome, Table};
use crate::error::{Error, Result};
use crate::tfcore::GridSpec;
use crate::windows::{build_pou_pair, build_pou_pair_split, frame_bounds, GaborFrameSpec, PouKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub t_period: f64,
    pub omega: f64,
    pub delta: f64,
    pub dt: f64,
    /// periods of LT on the circle used for the frame check
    pub periods: usize,
    /// periods used for the partition-of-unity check
    pub pou_periods: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameParams {
    pub lattices: Vec<Lattice>,
    pub frame_tol: f64,
    pub pou_tol: f64,
}

impl Default for FrameParams {
    fn default() -> Self {
        Self {
            lattices: vec![
                Lattice { t_period: 1.0, omega: 1.0, delta: 0.125, dt: 1.0 / 16.0, periods: 20, pou_periods: 16 },
                Lattice { t_period: 1.0, omega: 1.0 / 3.0, delta: 1.0 / 16.0, dt: 1.0 / 16.0, periods: 3, pou_periods: 16 },
            ],
            frame_tol: 1e-8,
            pou_tol: 1e-12,
        }
    }
}

fn l_of(lat: &Lattice) -> Result<usize> {
    let l = 1.0 / (lat.t_period * lat.omega);
    if (l - l.round()).abs() > 1e-9 || l.round() < 1.0 {
        return Err(Error::InvalidParameter(format!("1/(TΩ) = {l} is not a positive integer")));
    }
    Ok(l.round() as usize)
}

pub fn run(p: &FrameParams, seed: u64) -> Result<Outcome> {
    let mut t = Table::new(
        "frame_check",
        &["t_period", "omega", "delta", "b", "lower", "upper", "expected", "pou_linear", "pou_quadratic"],
    );
    let mut verdicts = Vec::new();
    for (i, lat) in p.lattices.iter().enumerate() {
        let l = l_of(lat)?;
        let fg = GridSpec::for_period(lat.t_period, lat.dt, l, lat.periods)?;
        // only r enters the frame; the frequency padding is irrelevant here
        let r = build_pou_pair_split(PouKind::Quadratic, lat.t_period, lat.omega, lat.delta, fg.dnu(), fg)?.r;
        let beta2 = 1.0 + 2.0 * lat.delta / lat.t_period;
        let b = l as f64 * lat.omega / beta2;
        let expected = beta2 / lat.t_period;
        let spec = GaborFrameSpec::new(r, lat.t_period, b, expected)?;
        let fb = frame_bounds(&spec, seed)?;
        let pg = GridSpec::for_period(lat.t_period, lat.dt, l, lat.pou_periods)?;
        let lin = build_pou_pair(PouKind::Linear, lat.t_period, lat.omega, lat.delta, pg)?.residuals()?;
        let quad = build_pou_pair(PouKind::Quadratic, lat.t_period, lat.omega, lat.delta, pg)?.residuals()?;
        let pl = lin.0.max(lin.1);
        let pq = quad.0.max(quad.1);
        t.push(vec![
            lat.t_period.into(),
            lat.omega.into(),
            lat.delta.into(),
            b.into(),
            fb.lower.into(),
            fb.upper.into(),
            expected.into(),
            pl.into(),
            pq.into(),
        ]);
        let tight = (fb.upper - fb.lower) / fb.lower;
        let off = (fb.lower - expected).abs() / expected;
        verdicts.push((format!("lattice{i}_tight"), tight <= p.frame_tol, format!("(B − A)/A = {tight:.3e}")));
        verdicts.push((format!("lattice{i}_bound"), off <= p.frame_tol, format!("A = {:.12}, expected {expected}", fb.lower)));
        verdicts.push((format!("lattice{i}_pou"), pl.max(pq) <= p.pou_tol, format!("residuals {pl:.2e}, {pq:.2e}")));
    }
    let mut out = Outcome::new(t);
    for (n, pass, d) in verdicts {
        out.check(&n, pass, d);
    }
    Ok(out)
}
