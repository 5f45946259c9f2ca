use super::bump::discrete_bump;
use crate::error::{Error, Result};
use crate::tfcore::{forward_ft, GridSpec, SampledSignal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Interval { lo: f64, hi: f64 },
    FullLine,
}

impl Band {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Band::Interval { lo, hi } => x >= lo - 1e-12 && x <= hi + 1e-12,
            Band::FullLine => true,
        }
    }
}

/// Nonnegative bump supported in [−δ, δ] with unit integral, together with
/// how flat its transform is on `band`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mollifier {
    pub phi: SampledSignal,
    pub phi_hat: SampledSignal,
    pub delta: f64,
    pub band: Band,
    /// max over grid points of the band of |φ̂ − 1|
    pub flatness_eps: f64,
    pub target_eps: f64,
    pub target_met: bool,
}

/// Normalized bump of half-width δ. On the full line the only admissible
/// choice is the discrete delta itself.
pub fn build_mollifier(delta: f64, band: Band, target_eps: f64, grid: GridSpec) -> Result<Mollifier> {
    grid.steps("mollifier δ", delta)?;
    if let Band::Interval { lo, hi } = band {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("bad band [{lo}, {hi}]")));
        }
    }
    let width = if band == Band::FullLine { 0.0 } else { delta };
    let phi = discrete_bump(grid, width)?;
    let phi_hat = forward_ft(&phi);
    let d = phi_hat.grid;
    let flatness_eps = (0..d.n())
        .filter(|&k| band.contains(d.coord(k)))
        .map(|k| (phi_hat.values[k] - 1.0).norm())
        .fold(0.0, f64::max);
    Ok(Mollifier { phi, phi_hat, delta, band, flatness_eps, target_eps, target_met: flatness_eps <= target_eps })
}
