use super::bump::{convolve, discrete_bump, quadratic_window, smooth_step};
use crate::error::{Error, Result};
use crate::tfcore::{inverse_ft, GridSpec, SampledSignal, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PouKind {
    /// Σ r(t - kT) = 1 = Σ φ̂(γ - nΩ)
    Linear,
    /// Σ |r(t - kT)|² = 1 = Σ |φ̂(γ - nΩ)|²
    Quadratic,
}

/// Reconstruction windows. `r` lives on [−δ_t, T + δ_t], `phi_hat` on
/// [−Ω/2 − δ_ν, Ω/2 + δ_ν] of the dual grid, and `phi` is its inverse
/// transform.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowPair {
    pub kind: PouKind,
    pub t_period: f64,
    pub omega: f64,
    pub delta_t: f64,
    pub delta_nu: f64,
    pub r: SampledSignal,
    pub phi: SampledSignal,
    pub phi_hat: SampledSignal,
}

// number of grid steps in `len`, checking that it tiles the circle
fn tiling_steps(grid: &GridSpec, what: &str, len: f64) -> Result<usize> {
    let s = grid.steps(what, len)?;
    if s <= 0 || grid.n() % s as usize != 0 {
        return Err(Error::InvalidParameter(format!("{what} = {len} does not tile the ambient period")));
    }
    Ok(s as usize)
}

fn indicator(grid: GridSpec, first: i64, len: usize) -> SampledSignal {
    let mut s = SampledSignal::zeros(grid);
    for i in 0..len as i64 {
        s.values[grid.wrap(first + i)] = C64::new(1.0, 0.0);
    }
    s
}

/// Same padding in time and frequency.
pub fn build_pou_pair(kind: PouKind, t: f64, omega: f64, delta: f64, grid: GridSpec) -> Result<WindowPair> {
    build_pou_pair_split(kind, t, omega, delta, delta, grid)
}

/// Window pair with separate paddings δ_t (time) and δ_ν (frequency).
pub fn build_pou_pair_split(
    kind: PouKind,
    t: f64,
    omega: f64,
    delta_t: f64,
    delta_nu: f64,
    grid: GridSpec,
) -> Result<WindowPair> {
    let dual = grid.dual();
    let nt = tiling_steps(&grid, "T", t)?;
    let nw = tiling_steps(&dual, "Ω", omega)?;
    if !(delta_t > 0.0 && delta_t < t / 2.0) {
        return Err(Error::InvalidParameter(format!("need 0 < δ_t < T/2, got δ_t = {delta_t}")));
    }
    if !(delta_nu > 0.0 && delta_nu < omega / 2.0) {
        return Err(Error::InvalidParameter(format!("need 0 < δ_ν < Ω/2, got δ_ν = {delta_nu}")));
    }
    grid.steps("δ_t", delta_t)?;
    dual.steps("δ_ν", delta_nu)?;
    let (r, phi_hat) = match kind {
        PouKind::Linear => {
            let r = convolve(&indicator(grid, 0, nt), &discrete_bump(grid, delta_t)?)?;
            let ph = convolve(&indicator(dual, -((nw / 2) as i64), nw), &discrete_bump(dual, delta_nu)?)?;
            (r, ph)
        }
        PouKind::Quadratic => {
            let r = SampledSignal::from_real_fn(grid, |x| quadratic_window(x, 0.0, t, delta_t));
            let w0 = -((nw / 2) as f64) * dual.dt;
            let ph = SampledSignal::from_real_fn(dual, |x| quadratic_window(x, w0, omega, delta_nu));
            (r, ph)
        }
    };
    let phi = inverse_ft(&phi_hat);
    Ok(WindowPair { kind, t_period: t, omega, delta_t, delta_nu, r, phi, phi_hat })
}

/// max over the grid of |Σ_k w(t - k·step) - 1| (or of the squared moduli).
pub fn pou_residual(w: &SampledSignal, step: f64, squared: bool) -> Result<f64> {
    let s = tiling_steps(&w.grid, "step", step)?;
    let mut acc = vec![0.0; s];
    let v = w.normalized().values;
    for (i, x) in v.iter().enumerate() {
        acc[i % s] += if squared { x.norm_sqr() } else { x.re };
    }
    let imag = if squared { 0.0 } else { v.iter().map(|x| x.im.abs()).fold(0.0, f64::max) };
    Ok(acc.iter().map(|a| (a - 1.0).abs()).fold(imag, f64::max))
}

impl WindowPair {
    /// (time residual, frequency residual) of the partition of unity.
    pub fn residuals(&self) -> Result<(f64, f64)> {
        let sq = self.kind == PouKind::Quadratic;
        Ok((pou_residual(&self.r, self.t_period, sq)?, pou_residual(&self.phi_hat, self.omega, sq)?))
    }

    /// Extreme coordinates of the nonzero samples of r and φ̂ (centered).
    pub fn supports(&self) -> ((f64, f64), (f64, f64)) {
        (support_of(&self.r), support_of(&self.phi_hat))
    }
}

/// Smallest interval (centered coordinates) containing all nonzero samples.
pub fn support_of(s: &SampledSignal) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let n = s.len();
    for i in 0..n {
        let k = s.grid.centered(i);
        if s.at(k) != C64::new(0.0, 0.0) {
            let x = k as f64 * s.grid.dt;
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo, hi)
}

/// Low-pass kernel for period T: φ̂ = T on |ξ| ≤ band, 0 for |ξ| ≥ cutoff,
/// smooth in between.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowPass {
    pub t_period: f64,
    pub band: f64,
    pub cutoff: f64,
    pub phi: SampledSignal,
    pub phi_hat: SampledSignal,
}

pub fn build_lowpass(grid: GridSpec, t: f64, band: f64, cutoff: f64) -> Result<LowPass> {
    tiling_steps(&grid, "T", t)?;
    if !(band > 0.0 && band < cutoff && cutoff <= 0.5 / t + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "low-pass needs 0 < band < cutoff ≤ 1/(2T), got band {band}, cutoff {cutoff}"
        )));
    }
    let phi_hat = SampledSignal::from_real_fn(grid.dual(), |x| {
        t * (1.0 - smooth_step((x.abs() - band) / (cutoff - band)))
    });
    let phi = inverse_ft(&phi_hat);
    Ok(LowPass { t_period: t, band, cutoff, phi, phi_hat })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(1.0 / 32.0, 32, 1, 32).unwrap()
    }

    #[test]
    fn linear_pair_is_a_partition() {
        let w = build_pou_pair(PouKind::Linear, 1.0, 1.0, 0.125, grid()).unwrap();
        let (a, b) = w.residuals().unwrap();
        assert!(a <= 1e-12 && b <= 1e-12, "{a} {b}");
        let ((t0, t1), (g0, g1)) = w.supports();
        assert!(t0 > -0.125 && t1 < 1.125);
        assert!(g0 > -0.625 && g1 < 0.625);
    }

    #[test]
    fn quadratic_pair_plateau_and_tails() {
        let g = grid();
        let w = build_pou_pair(PouKind::Quadratic, 1.0, 1.0, 0.125, g).unwrap();
        let (a, b) = w.residuals().unwrap();
        assert!(a <= 1e-12 && b <= 1e-12);
        for i in 0..g.n() {
            let t = g.coord(i);
            let v = w.r.values[i];
            assert_eq!(v.im, 0.0);
            if (0.125..=0.875).contains(&t) {
                assert_eq!(v.re, 1.0);
            }
            if t <= -0.125 || t >= 1.125 {
                assert_eq!(v.re, 0.0);
            }
        }
    }

    #[test]
    fn misaligned_or_wide_padding_is_rejected() {
        let g = grid();
        assert!(build_pou_pair(PouKind::Linear, 1.0, 1.0, 0.5, g).is_err());
        assert!(build_pou_pair(PouKind::Linear, 1.0, 1.0, 0.1, g).is_err());
        assert!(build_pou_pair(PouKind::Quadratic, 1.01, 1.0, 0.125, g).is_err());
    }

    #[test]
    fn lowpass_reproduces_band_limited_samples() {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 32).unwrap();
        let lp = build_lowpass(g, 1.0, 0.3, 0.5).unwrap();
        // g(x) = cos(2π·0.25x) + sin(2π·(9/32)x)
        let f = |x: f64| (2.0 * std::f64::consts::PI * 0.25 * x).cos() + (2.0 * std::f64::consts::PI * 9.0 / 32.0 * x).sin();
        for i in (0..g.n()).step_by(7) {
            let x = g.centered(i);
            let mut acc = C64::new(0.0, 0.0);
            for n in 0..32i64 {
                acc += f((n * 16) as f64 / 16.0) * lp.phi.at(x - n * 16);
            }
            assert!((acc.re - f(x as f64 / 16.0)).abs() < 1e-11 && acc.im.abs() < 1e-11);
        }
    }
}
