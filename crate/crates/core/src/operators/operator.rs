use super::support::SupportRegion;
use crate::error::{Error, Result};
use crate::tfcore::{fft, forward_ft, unit_roots, Axis, GridSpec, PlaneArray, SampledSignal, Semantics, C64};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Anything that maps signals on one grid to signals on the same grid.
pub trait Operator: Sync {
    fn grid(&self) -> GridSpec;
    fn apply(&self, f: &SampledSignal) -> Result<SampledSignal>;
    fn apply_adjoint(&self, f: &SampledSignal) -> Result<SampledSignal>;
    /// Calls `visit(x index, σ(x, ·))` for every x, with ξ on the full dual grid.
    fn for_each_symbol_row(&self, visit: &mut dyn FnMut(usize, &[C64])) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// η(t, γ)
    Spreading,
    /// e^{2πiγt} η(t, γ)
    SpreadingBold,
    /// σ(x, ξ)
    Symbol,
    /// symplectic transform of the bold spreading function
    SymbolBold,
    /// κ(x, y) = h(x, x − y)
    Kernel,
    /// h(x, t)
    Impulse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Spreading,
    Kernel,
}

/// Discrete operator Hf[n] = Σ η[i,k] e^{2πikn/N} f[n−i] dt dν with η
/// stored on its support only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandlimitedOperator {
    pub support: SupportRegion,
    /// Values of η on `support.cells`, same order.
    pub eta: Vec<C64>,
    #[serde(skip)]
    impulse: OnceLock<Vec<(usize, Vec<C64>)>>,
}

/// Σ_i h[x, i] f[x − i] dt over the stored time rows.
fn apply_rows(grid: GridSpec, rows: &[(usize, Vec<C64>)], f: &SampledSignal) -> Result<SampledSignal> {
    grid.check_same(&f.grid, "apply")?;
    let n = grid.n();
    let fv = f.normalized().values;
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, h) in rows {
        for x in 0..n {
            out[x] += h[x] * fv[(x + n - i) % n];
        }
    }
    out.iter_mut().for_each(|v| *v *= grid.dt);
    SampledSignal::new(grid, 0, out)
}

/// H*g[y] = Σ_i conj(h[y + i, i]) g[y + i] dt.
fn apply_rows_adjoint(grid: GridSpec, rows: &[(usize, Vec<C64>)], g: &SampledSignal) -> Result<SampledSignal> {
    grid.check_same(&g.grid, "adjoint apply")?;
    let n = grid.n();
    let gv = g.normalized().values;
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, h) in rows {
        for y in 0..n {
            let x = (y + i) % n;
            out[y] += h[x].conj() * gv[x];
        }
    }
    out.iter_mut().for_each(|v| *v *= grid.dt);
    SampledSignal::new(grid, 0, out)
}

/// σ(x, ·) = dt FFT_t h(x, ·), one row at a time.
pub(crate) fn symbol_rows_from_impulse(
    grid: GridSpec,
    rows: &[(usize, Vec<C64>)],
    visit: &mut dyn FnMut(usize, &[C64]),
) {
    let n = grid.n();
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for x in 0..n {
        buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (i, h) in rows {
            buf[*i] = h[x];
        }
        fft::forward(&mut buf);
        buf.iter_mut().for_each(|v| *v *= grid.dt);
        visit(x, &buf);
    }
}

impl BandlimitedOperator {
    pub fn new(support: SupportRegion, eta: Vec<C64>) -> Result<Self> {
        if eta.len() != support.len() {
            return Err(Error::GridMismatch(format!(
                "{} spreading values for {} support points",
                eta.len(),
                support.len()
            )));
        }
        Ok(Self { support, eta, impulse: OnceLock::new() })
    }

    /// η(t, γ) = f(t, γ) on the support (centered coordinates).
    pub fn from_fn(support: SupportRegion, f: impl Fn(f64, f64) -> C64) -> Self {
        let g = support.grid;
        let d = g.dual();
        let eta = support.cells.iter().map(|&(t, k)| f(g.coord(t), d.coord(k))).collect();
        Self { support, eta, impulse: OnceLock::new() }
    }

    pub fn zero(grid: GridSpec) -> Self {
        Self::new(SupportRegion::empty(grid), Vec::new()).unwrap()
    }

    /// f ↦ m·f, with η concentrated on the t = 0 row.
    pub fn multiplication(m: &SampledSignal) -> Self {
        let g = m.grid;
        let mh = forward_ft(m);
        let cells: Vec<(i64, i64)> =
            (0..g.n()).filter(|&k| mh.values[k].norm() > 0.0).map(|k| (0, k as i64)).collect();
        let support = SupportRegion::from_cells(g, cells);
        let eta = support.cells.iter().map(|&(_, k)| mh.values[k] / g.dt).collect();
        Self { support, eta, impulse: OnceLock::new() }
    }

    pub fn grid_spec(&self) -> GridSpec {
        self.support.grid
    }

    pub fn eta_at(&self, t: i64, g: i64) -> C64 {
        let grid = self.support.grid;
        match self.support.position(grid.wrap(t), grid.wrap(g)) {
            Some(p) => self.eta[p],
            None => C64::new(0.0, 0.0),
        }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self::new(self.support.clone(), self.eta.iter().map(|v| v * s).collect()).unwrap()
    }

    /// a·self + b·other on the union of the supports.
    pub fn combine(&self, a: C64, other: &BandlimitedOperator, b: C64) -> Result<Self> {
        self.support.grid.check_same(&other.support.grid, "operator combination")?;
        let cells = self.support.cells.iter().chain(&other.support.cells).map(|&(t, g)| (t as i64, g as i64));
        let support = SupportRegion::from_cells(self.support.grid, cells);
        let eta = support
            .cells
            .iter()
            .map(|&(t, g)| a * self.eta_at(t as i64, g as i64) + b * other.eta_at(t as i64, g as i64))
            .collect();
        Self::new(support, eta)
    }

    /// Riemann L2 norm of η.
    pub fn eta_norm(&self) -> f64 {
        let g = self.support.grid;
        (self.eta.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.dt * g.dnu()).sqrt()
    }

    /// h(·, t_i) = Σ_k η[i, k] e^{2πikn/N} dν for every support row.
    pub fn impulse_rows(&self) -> &[(usize, Vec<C64>)] {
        self.impulse.get_or_init(|| {
            let g = self.support.grid;
            let n = g.n();
            let dnu = g.dnu();
            let mut pos = 0;
            self.support
                .rows()
                .into_iter()
                .map(|(t, ks)| {
                    let mut buf = vec![C64::new(0.0, 0.0); n];
                    for k in ks {
                        buf[k] = self.eta[pos] * dnu;
                        pos += 1;
                    }
                    fft::inverse(&mut buf);
                    (t, buf)
                })
                .collect()
        })
    }

    pub fn apply_route(&self, f: &SampledSignal, route: Route) -> Result<SampledSignal> {
        let grid = self.support.grid;
        match route {
            Route::Kernel => apply_rows(grid, self.impulse_rows(), f),
            Route::Spreading => {
                grid.check_same(&f.grid, "apply")?;
                let n = grid.n();
                let roots = unit_roots(n);
                let fv = f.normalized().values;
                let mut out = vec![C64::new(0.0, 0.0); n];
                for (&(i, k), &e) in self.support.cells.iter().zip(&self.eta) {
                    let mut ph = 0usize;
                    let mut src = (n - i) % n;
                    for o in out.iter_mut() {
                        *o += e * roots[ph] * fv[src];
                        ph += k;
                        if ph >= n {
                            ph -= n;
                        }
                        src += 1;
                        if src == n {
                            src = 0;
                        }
                    }
                }
                let w = grid.dt * grid.dnu();
                out.iter_mut().for_each(|v| *v *= w);
                SampledSignal::new(grid, 0, out)
            }
        }
    }

    /// η_{H*}(t, γ) = e^{−2πiγt} conj(η(−t, −γ)).
    pub fn adjoint(&self) -> Self {
        let g = self.support.grid;
        let n = g.n();
        let roots = unit_roots(n);
        let support = self.support.reflected();
        let eta = support
            .cells
            .iter()
            .map(|&(t, k)| {
                let v = self.eta_at(-(t as i64), -(k as i64));
                v.conj() * roots[(n - (t * k) % n) % n]
            })
            .collect();
        Self { support, eta, impulse: OnceLock::new() }
    }

    /// Dense representation on the full grid.
    pub fn convert(&self, target: Representation) -> Result<PlaneArray> {
        let g = self.support.grid;
        let n = g.n();
        match target {
            Representation::Spreading | Representation::SpreadingBold => {
                let mut p = PlaneArray::full(g, Semantics::TimeFreq)?;
                let roots = unit_roots(n);
                for (&(t, k), &e) in self.support.cells.iter().zip(&self.eta) {
                    let chirp = if target == Representation::SpreadingBold { roots[(t * k) % n] } else { C64::new(1.0, 0.0) };
                    *p.get_mut(t, k) = e * chirp;
                }
                Ok(p)
            }
            Representation::SymbolBold => {
                crate::tfcore::symplectic_ft(&self.convert(Representation::SpreadingBold)?)
            }
            Representation::Symbol => {
                let mut p = PlaneArray::full(g, Semantics::Symbol)?;
                symbol_rows_from_impulse(g, self.impulse_rows(), &mut |x, row| {
                    p.values[x * n..(x + 1) * n].copy_from_slice(row)
                });
                Ok(p)
            }
            Representation::Impulse => {
                let mut p = PlaneArray::full(g, Semantics::Impulse)?;
                for (t, h) in self.impulse_rows() {
                    for x in 0..n {
                        *p.get_mut(x, *t) = h[x];
                    }
                }
                Ok(p)
            }
            Representation::Kernel => {
                let mut p = PlaneArray::full(g, Semantics::Kernel)?;
                for (t, h) in self.impulse_rows() {
                    for x in 0..n {
                        *p.get_mut(x, (x + n - t) % n) = h[x];
                    }
                }
                Ok(p)
            }
        }
    }

    /// Inverse of the symplectic transform followed by restriction to the
    /// support: the η of a symbol plane.
    pub fn from_symbol(support: SupportRegion, sigma: &PlaneArray) -> Result<Self> {
        if sigma.semantics != Semantics::Symbol {
            return Err(Error::InvalidParameter("expected a symbol plane".into()));
        }
        let eta_plane = crate::tfcore::symplectic_ft(sigma)?;
        let eta = support.cells.iter().map(|&(t, k)| eta_plane.get(t, k)).collect();
        Self::new(support, eta)
    }
}

impl Operator for BandlimitedOperator {
    fn grid(&self) -> GridSpec {
        self.support.grid
    }

    fn apply(&self, f: &SampledSignal) -> Result<SampledSignal> {
        self.apply_route(f, Route::Kernel)
    }

    fn apply_adjoint(&self, f: &SampledSignal) -> Result<SampledSignal> {
        apply_rows_adjoint(self.support.grid, self.impulse_rows(), f)
    }

    fn for_each_symbol_row(&self, visit: &mut dyn FnMut(usize, &[C64])) -> Result<()> {
        symbol_rows_from_impulse(self.support.grid, self.impulse_rows(), visit);
        Ok(())
    }
}

/// Operator given by samples of its impulse response h(x, t) on a set of
/// time rows. This is what the recovery routines produce.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelOperator {
    pub grid: GridSpec,
    /// (t index, h(·, t)) for the nonzero rows.
    pub rows: Vec<(usize, Vec<C64>)>,
}

impl KernelOperator {
    pub fn new(grid: GridSpec, mut rows: Vec<(usize, Vec<C64>)>) -> Result<Self> {
        if rows.iter().any(|(t, h)| *t >= grid.n() || h.len() != grid.n()) {
            return Err(Error::GridMismatch("kernel rows do not match the grid".into()));
        }
        rows.sort_by_key(|r| r.0);
        // merge duplicate rows
        let mut merged: Vec<(usize, Vec<C64>)> = Vec::with_capacity(rows.len());
        for (t, h) in rows {
            match merged.last_mut() {
                Some((tt, hh)) if *tt == t => hh.iter_mut().zip(&h).for_each(|(a, b)| *a += b),
                _ => merged.push((t, h)),
            }
        }
        Ok(Self { grid, rows: merged })
    }

    pub fn from_bandlimited(op: &BandlimitedOperator) -> Self {
        Self { grid: op.support.grid, rows: op.impulse_rows().to_vec() }
    }

    /// h(x, t) as an Impulse plane over x and the contiguous t range of rows.
    pub fn impulse_plane(&self) -> Result<PlaneArray> {
        let n = self.grid.n();
        let (first, len) = match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => (a.0 as i64, b.0 - a.0 + 1),
            _ => (0, 0),
        };
        let mut p = PlaneArray::zeros(Axis::full(self.grid), Axis::span(self.grid, first, len), Semantics::Impulse)?;
        for (t, h) in &self.rows {
            let j = t - first as usize;
            for x in 0..n {
                *p.get_mut(x, j) = h[x];
            }
        }
        Ok(p)
    }

    pub fn symbol(&self) -> Result<PlaneArray> {
        let n = self.grid.n();
        let mut p = PlaneArray::full(self.grid, Semantics::Symbol)?;
        symbol_rows_from_impulse(self.grid, &self.rows, &mut |x, row| p.values[x * n..(x + 1) * n].copy_from_slice(row));
        Ok(p)
    }

    /// Spreading function restricted to a support (exact when the kernel
    /// came from an operator supported there).
    pub fn to_bandlimited(&self, support: SupportRegion) -> Result<BandlimitedOperator> {
        self.grid.check_same(&support.grid, "kernel to spreading")?;
        let mut eta = Vec::with_capacity(support.len());
        for (t, ks) in support.rows() {
            let mut buf = match self.rows.binary_search_by_key(&t, |r| r.0) {
                Ok(p) => self.rows[p].1.clone(),
                Err(_) => vec![C64::new(0.0, 0.0); self.grid.n()],
            };
            fft::forward(&mut buf);
            for k in ks {
                eta.push(buf[k] * self.grid.dt);
            }
        }
        BandlimitedOperator::new(support, eta)
    }
}

impl Operator for KernelOperator {
    fn grid(&self) -> GridSpec {
        self.grid
    }

    fn apply(&self, f: &SampledSignal) -> Result<SampledSignal> {
        apply_rows(self.grid, &self.rows, f)
    }

    fn apply_adjoint(&self, f: &SampledSignal) -> Result<SampledSignal> {
        apply_rows_adjoint(self.grid, &self.rows, f)
    }

    fn for_each_symbol_row(&self, visit: &mut dyn FnMut(usize, &[C64])) -> Result<()> {
        symbol_rows_from_impulse(self.grid, &self.rows, visit);
        Ok(())
    }
}
