//! Reconstruction from a single response: kernels, Zak-domain slices,
//! discrete symbol coefficients and symbols rebuilt from them.

pub mod coefficients;
pub mod kernel;
pub mod symbol;
pub mod zak;

pub use coefficients::{discrete_coefficients, CoefficientTable};
pub use kernel::{lowpass_from_window, recover_kernel_general, recover_kernel_rect};
pub use symbol::{operator_from_coefficients, symbol_from_coefficients, CoefficientOperator};
pub use zak::{reassemble_spreading, zak_system_solve, ZakSlices};

use crate::error::{Error, Result};
use crate::identify::SamplingScheme;
use crate::tfcore::{cis, GridSpec, SampledSignal, C64};
use crate::windows::WindowPair;

/// Integer form of a scheme on a concrete grid.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Geometry {
    pub n: usize,
    /// samples per T
    pub nt: i64,
    /// dν-samples per Ω
    pub k_om: i64,
    pub t0: i64,
    pub g0: i64,
}

impl Geometry {
    pub fn new(scheme: &SamplingScheme, grid: &GridSpec) -> Result<Self> {
        scheme.check_grid(grid)?;
        let n = grid.n();
        let nt = grid.steps("T", scheme.t_period)?;
        let k_om = grid.dual().steps("Ω", scheme.omega)?;
        let t0 = grid.steps("origin t", scheme.origin_t)?;
        let g0 = grid.dual().steps("origin γ", scheme.origin_gamma)?;
        Ok(Self { n, nt, k_om, t0, g0 })
    }

    /// e^{2πi a/N}
    pub fn root(&self, a: i64) -> C64 {
        let n = self.n as i64;
        cis(std::f64::consts::TAU * a.rem_euclid(n) as f64 / n as f64)
    }

    /// Number of deltas on the circle.
    pub fn lk(&self) -> usize {
        self.n / self.nt as usize
    }
}

/// Response of the translated operator: e^{−2πiγ₀x} Hw(x).
pub(crate) fn demodulate(response: &SampledSignal, geo: &Geometry) -> Vec<C64> {
    let v = response.normalized().values;
    v.iter().enumerate().map(|(x, a)| a * geo.root(-geo.g0 * x as i64)).collect()
}

pub(crate) fn check_windows(scheme: &SamplingScheme, w: &WindowPair, grid: &GridSpec) -> Result<()> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    if !close(w.t_period, scheme.t_period) || !close(w.omega, scheme.omega) {
        return Err(Error::InvalidParameter("windows were built for another T or Ω".into()));
    }
    if !close(w.delta_t, scheme.delta_t) || !close(w.delta_nu, scheme.delta_nu) {
        return Err(Error::InvalidParameter(format!(
            "window paddings ({}, {}) differ from the scheme's ({}, {})",
            w.delta_t, w.delta_nu, scheme.delta_t, scheme.delta_nu
        )));
    }
    w.r.grid.check_same(grid, "windows")
}

/// Nonzero samples of a signal as (centered index, value).
pub(crate) fn taps(s: &SampledSignal) -> Vec<(i64, C64)> {
    let v = s.normalized().values;
    v.iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(i, a)| (s.grid.centered(i), *a))
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::identify::{make_weights, SamplingScheme};
    use crate::operators::{random_opw, BandlimitedOperator, Rect, SupportRegion};
    use crate::tfcore::GridSpec;

    /// L = 3, T = 1, cells (0,0), (1,−1), (−1,0), paddings 1/8 and 1/24.
    pub fn three_cell_scheme(origin: (f64, f64)) -> SamplingScheme {
        let s = SamplingScheme::geometry(3, 1.0, 0.125, 1.0 / 24.0, origin, vec![(0, 0), (1, -1), (-1, 0)]).unwrap();
        make_weights(&s, 11).unwrap()
    }

    pub fn grid(dt_inv: usize) -> GridSpec {
        GridSpec::new(1.0 / dt_inv as f64, dt_inv, 3, 8).unwrap()
    }

    /// Blocks strictly inside the padded-shrunk cells of the scheme.
    pub fn in_space_support(s: &SamplingScheme, grid: GridSpec) -> SupportRegion {
        let rects: Vec<Rect> = s
            .shifts
            .iter()
            .map(|&(k, n)| {
                let t = k as f64 * s.t_period + s.origin_t;
                let g = n as f64 * s.omega + s.origin_gamma;
                Rect::new(t + 0.2, t + 0.8, g - 0.08, g + 0.08)
            })
            .collect();
        SupportRegion::from_rects(grid, &rects)
    }

    pub fn in_space_operator(s: &SamplingScheme, grid: GridSpec, seed: u64) -> BandlimitedOperator {
        random_opw(&in_space_support(s, grid), seed, 2).unwrap()
    }
}
