//! The smooth compactly supported building blocks used by every window.

use crate::error::{Error, Result};
use crate::tfcore::{GridSpec, SampledSignal, C64};
use std::f64::consts::FRAC_PI_2;

/// exp(-1/(1-x²)) on (-1, 1), zero elsewhere.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

const GL_X: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_W: [f64; 5] = [0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1, 0.236_926_885_056_189_1];
const PANELS: usize = 32;

// ∫_0^u bump(2v - 1) dv by composite Gauss-Legendre
fn bump_integral(u: f64) -> f64 {
    let h = u / PANELS as f64;
    let mut acc = 0.0;
    for p in 0..PANELS {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in GL_X.iter().zip(GL_W) {
            acc += w * bump(2.0 * (mid + 0.5 * h * x) - 1.0);
        }
    }
    acc * 0.5 * h
}

/// Normalized bump integral: 0 for u ≤ 0, 1 for u ≥ 1, smooth and
/// increasing in between.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    thread_local! {
        static TOTAL: f64 = 2.0 * bump_integral(0.5);
    }
    let z = TOTAL.with(|t| *t);
    // integrate from the nearer end for accuracy and symmetry
    if u <= 0.5 {
        bump_integral(u) / z
    } else {
        1.0 - bump_integral(1.0 - u) / z
    }
}

/// Window on [start, start + len] whose squared translates by `len` sum to
/// one: sin/cos transitions of half-width `delta` around both endpoints.
pub fn quadratic_window(x: f64, start: f64, len: f64, delta: f64) -> f64 {
    let end = start + len;
    if x <= start - delta || x >= end + delta {
        0.0
    } else if x < start + delta {
        (FRAC_PI_2 * smooth_step((x - start + delta) / (2.0 * delta))).sin()
    } else if x <= end - delta {
        1.0
    } else {
        (FRAC_PI_2 * smooth_step((x - end + delta) / (2.0 * delta))).cos()
    }
}

/// Sampled bump of half-width `half_width`, normalized to unit integral.
/// A zero half-width gives the discrete delta (height 1/dt).
pub fn discrete_bump(grid: GridSpec, half_width: f64) -> Result<SampledSignal> {
    let w = grid.steps("bump half-width", half_width)?;
    if w < 0 {
        return Err(Error::InvalidParameter("negative bump width".into()));
    }
    if 2 * w as usize >= grid.n() {
        return Err(Error::InvalidParameter("bump wider than the ambient period".into()));
    }
    let mut s = SampledSignal::zeros(grid);
    if w == 0 {
        s.values[0] = C64::new(1.0 / grid.dt, 0.0);
        return Ok(s);
    }
    let mut total = 0.0;
    for i in -w..=w {
        let v = bump(i as f64 / w as f64);
        s.values[grid.wrap(i)] = C64::new(v, 0.0);
        total += v;
    }
    let scale = 1.0 / (total * grid.dt);
    s.values.iter_mut().for_each(|v| *v *= scale);
    Ok(s)
}

/// Circular convolution dt Σ a(s) b(t - s) of two signals on one grid.
pub fn convolve(a: &SampledSignal, b: &SampledSignal) -> Result<SampledSignal> {
    a.grid.check_same(&b.grid, "convolution")?;
    let g = a.grid;
    let n = g.n();
    let av = a.normalized().values;
    let bv = b.normalized().values;
    let nz: Vec<usize> = (0..n).filter(|&i| bv[i] != C64::new(0.0, 0.0)).collect();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, &x) in av.iter().enumerate() {
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        for &j in &nz {
            out[(i + j) % n] += x * bv[j];
        }
    }
    out.iter_mut().for_each(|v| *v *= g.dt);
    SampledSignal::new(g, 0, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_monotone_and_antisymmetric() {
        let mut prev = 0.0;
        for i in 0..=200 {
            let u = i as f64 / 200.0;
            let s = smooth_step(u);
            assert!(s >= prev);
            assert!((s + smooth_step(1.0 - u) - 1.0).abs() < 1e-14);
            prev = s;
        }
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
    }

    #[test]
    fn quadratic_window_plateau_and_tails() {
        for i in 0..=100 {
            let x = -0.5 + 2.0 * i as f64 / 100.0;
            let v = quadratic_window(x, 0.0, 1.0, 0.125);
            if (0.125..=0.875).contains(&x) {
                assert_eq!(v, 1.0);
            }
            if x <= -0.125 || x >= 1.125 {
                assert_eq!(v, 0.0);
            }
            let s = v * v + quadratic_window(x - 1.0, 0.0, 1.0, 0.125).powi(2) + quadratic_window(x + 1.0, 0.0, 1.0, 0.125).powi(2);
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn discrete_bump_has_unit_mass() {
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 4).unwrap();
        let b = discrete_bump(g, 0.25).unwrap();
        let mass: C64 = b.values.iter().sum::<C64>() * g.dt;
        assert!((mass.re - 1.0).abs() < 1e-14);
        assert_eq!(b.at(8), C64::new(0.0, 0.0));
        assert!(b.at(7).re > 0.0);
        let d = discrete_bump(g, 0.0).unwrap();
        assert_eq!(d.values[0].re, 32.0);
    }
}
