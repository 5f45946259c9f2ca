use super::{check_windows, demodulate, taps, Geometry};
use crate::error::{Error, Result};
use crate::identify::SamplingScheme;
use crate::tfcore::{fft, SampledSignal, C64};
use crate::windows::{PouKind, WindowPair};
use serde::Serialize;
use std::path::Path;

/// σ⁽ʲ⁾ₘ,ℓ on the lattice (LT/β₁)ℤ × (LΩ/β₂)ℤ, one sheet per cell.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub scheme: SamplingScheme,
    pub windows: WindowPair,
    pub beta1: f64,
    pub beta2: f64,
    /// LT/β₁
    pub a_step: f64,
    /// LΩ/β₂
    pub b_step: f64,
    pub n_m: usize,
    pub n_l: usize,
    /// index (j n_m + m) n_l + ℓ, with m and ℓ wrapped
    pub values: Vec<C64>,
}

#[derive(Serialize)]
struct Row {
    j: usize,
    m: i64,
    l: i64,
    x_pos: f64,
    xi_pos: f64,
    re: f64,
    im: f64,
}

fn centered(i: usize, n: usize) -> i64 {
    if i >= (n + 1) / 2 {
        i as i64 - n as i64
    } else {
        i as i64
    }
}

fn wrap_coord(x: f64, period: f64) -> f64 {
    (x + period / 2.0).rem_euclid(period) - period / 2.0
}

impl CoefficientTable {
    pub fn get(&self, j: usize, m: usize, l: usize) -> C64 {
        self.values[(j * self.n_m + m) * self.n_l + l]
    }

    pub fn signed(&self, m: usize, l: usize) -> (i64, i64) {
        (centered(m, self.n_m), centered(l, self.n_l))
    }

    /// Where atom (j, m, ℓ) is concentrated in the (x, ξ) plane.
    pub fn position(&self, j: usize, m: usize, l: usize) -> (f64, f64) {
        let (ms, ls) = self.signed(m, l);
        let (k, n) = self.scheme.shifts[j];
        let g = self.windows.r.grid;
        let x = k as f64 * self.scheme.t_period + ms as f64 * self.a_step + self.scheme.t_period / 2.0;
        let xi = ls as f64 * self.b_step - n as f64 * self.scheme.omega;
        (wrap_coord(x, g.duration()), wrap_coord(xi, 1.0 / g.dt))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Copy keeping only atoms whose position satisfies `keep`.
    pub fn restricted(&self, keep: &dyn Fn(f64, f64) -> bool) -> CoefficientTable {
        let mut out = self.clone();
        for j in 0..self.scheme.l {
            for m in 0..self.n_m {
                for l in 0..self.n_l {
                    let (x, xi) = self.position(j, m, l);
                    if !keep(x, xi) {
                        out.values[(j * self.n_m + m) * self.n_l + l] = C64::new(0.0, 0.0);
                    }
                }
            }
        }
        out
    }

    /// Number of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|v| v.norm() > 0.0).count()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for j in 0..self.scheme.l {
            for m in 0..self.n_m {
                for l in 0..self.n_l {
                    let (ms, ls) = self.signed(m, l);
                    let (x_pos, xi_pos) = self.position(j, m, l);
                    let v = self.get(j, m, l);
                    w.serialize(Row { j, m: ms, l: ls, x_pos, xi_pos, re: v.re, im: v.im })?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// σ⁽ʲ⁾ₘ,ℓ = LT Σ_q b_{jq} φ((k_j − q)T + m LT/β₁) ⟨Hw, T_{qT} M_{ℓLΩ/β₂} r⟩
/// for the translated operator, over every in-period (j, m, ℓ).
pub fn discrete_coefficients(
    response: &SampledSignal,
    scheme: &SamplingScheme,
    windows: &WindowPair,
    beta1: f64,
    beta2: f64,
) -> Result<CoefficientTable> {
    let grid = response.grid;
    if windows.kind != PouKind::Quadratic {
        return Err(Error::InvalidParameter("coefficients need a quadratic partition of unity".into()));
    }
    check_windows(scheme, windows, &grid)?;
    if !scheme.has_weights() {
        return Err(Error::InvalidParameter("scheme has no weights".into()));
    }
    let floor2 = 1.0 + 2.0 * scheme.delta_t / scheme.t_period;
    let floor1 = 1.0 + 2.0 * scheme.delta_nu / scheme.omega;
    if beta2 < floor2 - 1e-12 || beta1 < floor1 - 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "oversampling below its floor: β₁ = {beta1} (≥ {floor1}), β₂ = {beta2} (≥ {floor2})"
        )));
    }
    let geo = Geometry::new(scheme, &grid)?;
    let n = grid.n();
    let lt = scheme.l as f64 * scheme.t_period;
    let a_step = lt / beta1;
    let b_step = scheme.l as f64 * scheme.omega / beta2;
    let a_s = grid.steps("LT/β₁", a_step)?;
    let b_s = grid.dual().steps("LΩ/β₂", b_step)?;
    if a_s <= 0 || b_s <= 0 || n % a_s as usize != 0 || n % b_s as usize != 0 {
        return Err(Error::InvalidParameter("oversampling lattice does not tile the grid".into()));
    }
    let n_m = n / a_s as usize;
    let n_l = n / b_s as usize;
    let resp = demodulate(response, &geo);
    let r_taps = taps(&windows.r);
    let lk = geo.lk();
    // inner products ⟨Hw, T_{qT} M_{ℓb} r⟩
    let mut inner = vec![C64::new(0.0, 0.0); lk * n_l];
    for q in 0..lk {
        let row = &mut inner[q * n_l..(q + 1) * n_l];
        for &(u, rv) in &r_taps {
            row[u.rem_euclid(n_l as i64) as usize] += resp[grid.wrap(u + q as i64 * geo.nt)] * rv.conj();
        }
        fft::forward(row);
        row.iter_mut().for_each(|v| *v *= grid.dt);
    }
    let phi = windows.phi.normalized();
    let mut values = vec![C64::new(0.0, 0.0); scheme.l * n_m * n_l];
    for (j, &(kj, _)) in scheme.shifts.iter().enumerate() {
        for m in 0..n_m {
            let out = &mut values[(j * n_m + m) * n_l..(j * n_m + m + 1) * n_l];
            for q in 0..lk {
                let coef = scheme.b_coeff(j, q as i64)
                    * phi.values[grid.wrap((kj - q as i64) * geo.nt + m as i64 * a_s)]
                    * lt;
                if coef.norm() == 0.0 {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(&inner[q * n_l..(q + 1) * n_l]) {
                    *o += coef * c;
                }
            }
        }
    }
    Ok(CoefficientTable {
        scheme: scheme.clone(),
        windows: windows.clone(),
        beta1,
        beta2,
        a_step,
        b_step,
        n_m,
        n_l,
        values,
    })
}
