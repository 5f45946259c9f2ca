use super::fft;
use super::grid::{Axis, GridSpec};
use super::plane::{PlaneArray, Semantics};
use super::signal::{cis, SampledSignal, C64, ZERO};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// ŝ(k dν) = dt Σ s(t) e^{-2πi k dν t}. Output lives on the dual grid with
/// frequency zero at index 0.
pub fn forward_ft(s: &SampledSignal) -> SampledSignal {
    let mut v = s.normalized().values;
    fft::forward(&mut v);
    let dt = s.grid.dt;
    v.iter_mut().for_each(|x| *x *= dt);
    SampledSignal { grid: s.grid.dual(), origin_index: 0, values: v }
}

/// Inverse of [`forward_ft`]: s(t) = dν Σ ŝ(ν) e^{2πiνt}.
pub fn inverse_ft(s: &SampledSignal) -> SampledSignal {
    let mut v = s.normalized().values;
    fft::inverse(&mut v);
    let dnu = s.grid.dt;
    v.iter_mut().for_each(|x| *x *= dnu);
    SampledSignal { grid: s.grid.dual(), origin_index: 0, values: v }
}

/// F(a, b) = Σ_u Σ_v p(u, v) e^{-2πi(u b - a v)} du dv.
///
/// The first output axis is dual to the second input axis, so a (t, γ) plane
/// maps to an (x, ξ) plane and back. On the periodic grid this is an exact
/// involution, no reflection needed.
pub fn symplectic_ft(p: &PlaneArray) -> Result<PlaneArray> {
    let sem = match p.semantics {
        Semantics::TimeFreq => Semantics::Symbol,
        Semantics::Symbol => Semantics::TimeFreq,
        other => {
            return Err(Error::InvalidParameter(format!(
                "symplectic transform is defined for (t,γ) and (x,ξ) planes, not {other:?}"
            )))
        }
    };
    if !p.x.is_full() || !p.y.is_full() {
        return Err(Error::InvalidParameter("symplectic transform needs full axes".into()));
    }
    let (nu, nv) = p.shape();
    let du = p.x.grid.dt;
    let dv = p.y.grid.dt;
    // transpose so that rows run over u
    let mut buf = vec![ZERO; nu * nv];
    for u in 0..nu {
        for v in 0..nv {
            buf[v * nu + u] = p.values[u * nv + v];
        }
    }
    // rows (index u) forward, columns (index v) inverse
    fft::transform_2d(&mut buf, nv, nu, false, true);
    let w = du * dv;
    buf.iter_mut().for_each(|x| *x *= w);
    Ok(PlaneArray {
        x: Axis::full(p.y.grid.dual()),
        y: Axis::full(p.x.grid.dual()),
        semantics: sem,
        values: buf,
    })
}

/// V_g f(x, ξ) = dt Σ_t f(t) conj(g(t - x)) e^{-2πiξt} at grid-aligned (x, ξ).
pub fn stft(f: &SampledSignal, window: &SampledSignal, x: f64, xi: f64) -> Result<C64> {
    f.grid.check_same(&window.grid, "stft")?;
    let xs = f.grid.steps("x", x)?;
    let ks = f.grid.dual().steps("xi", xi)?;
    Ok(stft_at(f, window, xs, ks))
}

/// Integer-index form of [`stft`]: x = xs dt, ξ = ks dν.
pub fn stft_at(f: &SampledSignal, window: &SampledSignal, xs: i64, ks: i64) -> C64 {
    let n = f.len() as i64;
    let mut acc = ZERO;
    for t in 0..n {
        let a = f.at(t);
        if a == ZERO {
            continue;
        }
        let g = window.at(t - xs);
        if g == ZERO {
            continue;
        }
        let ph = (ks * t).rem_euclid(n) as f64 / n as f64;
        acc += a * g.conj() * cis(-2.0 * PI * ph);
    }
    acc * f.grid.dt
}

/// V_g f on the whole (x, ξ) grid, one FFT per x.
pub fn stft_plane(f: &SampledSignal, window: &SampledSignal) -> Result<PlaneArray> {
    f.grid.check_same(&window.grid, "stft")?;
    let mut out = PlaneArray::full(f.grid, Semantics::Symbol)?;
    let n = f.len();
    let fv = f.normalized().values;
    let gv = window.normalized().values;
    let mut buf = vec![ZERO; n];
    for x in 0..n {
        for t in 0..n {
            buf[t] = fv[t] * gv[(t + n - x) % n].conj();
        }
        fft::forward(&mut buf);
        for k in 0..n {
            *out.get_mut(x, k) = buf[k] * f.grid.dt;
        }
    }
    Ok(out)
}

/// Non-normalized Zak transform Z f(t, ν) = Σ_{n<K} f(t - n LT) e^{2πi n LT ν}
/// on t ∈ [0, LT) and K frequencies ν = m dν, m ∈ [-K/2, K/2).
pub fn zak_transform(f: &SampledSignal, l: usize, t_period: f64) -> Result<PlaneArray> {
    let g = f.grid;
    let m_len = g.steps("LT", l as f64 * t_period)?;
    if m_len <= 0 || g.n() % m_len as usize != 0 {
        return Err(Error::InvalidParameter(format!(
            "LT = {} does not divide the ambient period {}",
            l as f64 * t_period,
            g.duration()
        )));
    }
    let m_len = m_len as usize;
    let k = g.n() / m_len;
    let first = -((k / 2) as i64);
    let x = Axis::span(g, 0, m_len);
    let y = Axis::span(g.dual(), first, k);
    let mut out = PlaneArray::zeros(x, y, Semantics::TimeFreq)?;
    let mut buf = vec![ZERO; k];
    for s in 0..m_len {
        for (nn, b) in buf.iter_mut().enumerate() {
            *b = f.at(s as i64 - (nn * m_len) as i64);
        }
        fft::inverse(&mut buf);
        // buf[j] holds frequency index j mod K
        for col in 0..k {
            let m = first + col as i64;
            *out.get_mut(s, col) = buf[m.rem_euclid(k as i64) as usize];
        }
    }
    Ok(out)
}

/// Z f at arbitrary integer (time sample, frequency sample) using
/// quasi-periodicity in t and periodicity Ω in ν.
pub fn zak_value(z: &PlaneArray, ts: i64, ms: i64) -> C64 {
    let m_len = z.x.len as i64;
    let k = z.y.len as i64;
    let q = ts.div_euclid(m_len);
    let s = ts.rem_euclid(m_len);
    let col = (ms - z.y.first).rem_euclid(k);
    // Z(t + qLT, ν) = e^{2πiνqLT} Z(t, ν); ν LT = m / K
    let ph = (ms * q).rem_euclid(k) as f64 / k as f64;
    z.get(s as usize, col as usize) * cis(2.0 * PI * ph)
}

/// Recovers f from its Zak transform: f(t) = (1/K) Σ_ν Z f(t, ν) on [0, LT),
/// and the other periods through quasi-periodicity.
pub fn inverse_zak(z: &PlaneArray, grid: GridSpec) -> Result<SampledSignal> {
    let m_len = z.x.len;
    let k = z.y.len;
    if m_len * k != grid.n() {
        return Err(Error::GridMismatch("Zak plane does not tile the grid".into()));
    }
    let mut out = SampledSignal::zeros(grid);
    let mut buf = vec![ZERO; k];
    for s in 0..m_len {
        for col in 0..k {
            let m = z.y.first + col as i64;
            buf[m.rem_euclid(k as i64) as usize] = z.get(s, col);
        }
        // f(s - n LT) = (1/K) Σ_m Z(s, m) e^{-2πi n m / K}
        fft::forward(&mut buf);
        for (nn, v) in buf.iter().enumerate() {
            let idx = grid.wrap(s as i64 - (nn * m_len) as i64);
            out.values[idx] = v / k as f64;
        }
    }
    Ok(out)
}
