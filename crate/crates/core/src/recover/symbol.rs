use super::coefficients::CoefficientTable;
use super::{taps, Geometry};
use crate::error::Result;
use crate::operators::Operator;
use crate::tfcore::{fft, forward_ft, Axis, GridSpec, PlaneArray, SampledSignal, Semantics, C64};
use rayon::prelude::*;

/// Operator whose symbol is the atom expansion of a coefficient table,
/// evaluated row by row on demand.
#[derive(Debug, Clone)]
pub struct CoefficientOperator {
    grid: GridSpec,
    geo: Geometry,
    shifts: Vec<(i64, i64)>,
    a_s: i64,
    scale: f64,
    r_taps: Vec<i64>,
    phi_conj: Vec<C64>,
    /// per j: (m, R_{j,m}(u) on the taps of r) for the nonzero sheets
    sheets: Vec<Vec<(i64, Vec<C64>)>>,
}

impl CoefficientOperator {
    pub fn new(table: &CoefficientTable) -> Result<Self> {
        let grid = table.windows.r.grid;
        let geo = Geometry::new(&table.scheme, &grid)?;
        let a_s = grid.steps("LT/β₁", table.a_step)?;
        let r_taps = taps(&table.windows.r);
        let n_l = table.n_l;
        let mut sheets = Vec::with_capacity(table.scheme.l);
        let mut buf = vec![C64::new(0.0, 0.0); n_l];
        for j in 0..table.scheme.l {
            let mut js = Vec::new();
            for m in 0..table.n_m {
                let src = &table.values[(j * table.n_m + m) * n_l..(j * table.n_m + m + 1) * n_l];
                if src.iter().all(|v| v.norm() == 0.0) {
                    continue;
                }
                buf.copy_from_slice(src);
                // Σ_ℓ σ e^{2πiℓu/n_l}
                fft::inverse(&mut buf);
                let vals = r_taps.iter().map(|&(u, rv)| rv * buf[u.rem_euclid(n_l as i64) as usize]).collect();
                js.push((m as i64, vals));
            }
            sheets.push(js);
        }
        let phi_conj = table.windows.phi.normalized().values.iter().map(|v| v.conj()).collect();
        Ok(Self {
            grid,
            geo,
            shifts: table.scheme.shifts.clone(),
            a_s,
            scale: table.a_step * table.b_step,
            r_taps: r_taps.iter().map(|t| t.0).collect(),
            phi_conj,
            sheets,
        })
    }

    /// σ(x, ·) on the full dual grid for signed time index x.
    pub fn symbol_row(&self, x: i64) -> Vec<C64> {
        let g = self.grid;
        let n = g.n();
        let geo = &self.geo;
        let mut out = vec![C64::new(0.0, 0.0); n];
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for (j, &(kj, nj)) in self.shifts.iter().enumerate() {
            if self.sheets[j].is_empty() {
                continue;
            }
            buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            let base = kj * geo.nt - x;
            for (ti, &u) in self.r_taps.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (m, vals) in &self.sheets[j] {
                    acc += vals[ti] * self.phi_conj[g.wrap(u + base + m * self.a_s)];
                }
                buf[g.wrap(u)] = acc;
            }
            fft::forward(&mut buf);
            let c0 = geo.root(x * nj * geo.k_om - nj * geo.k_om * kj * geo.nt);
            for (k, o) in out.iter_mut().enumerate() {
                let ki = g.centered(k);
                *o += c0 * geo.root(-ki * kj * geo.nt) * buf[g.wrap(ki + nj * geo.k_om)];
            }
        }
        let s = self.scale * g.dt;
        let cx = geo.root(geo.g0 * x);
        for (k, o) in out.iter_mut().enumerate() {
            *o *= s * cx * geo.root(-g.centered(k) * geo.t0);
        }
        out
    }

    // h(x, ·) = dν Σ_ξ σ(x, ξ) e^{2πiξt}
    fn impulse_row(&self, x: i64) -> Vec<C64> {
        let mut row = self.symbol_row(x);
        fft::inverse(&mut row);
        let dnu = self.grid.dnu();
        row.iter_mut().for_each(|v| *v *= dnu);
        row
    }
}

impl Operator for CoefficientOperator {
    fn grid(&self) -> GridSpec {
        self.grid
    }

    fn apply(&self, f: &SampledSignal) -> Result<SampledSignal> {
        let g = self.grid;
        g.check_same(&f.grid, "apply")?;
        let fh = forward_ft(f).normalized().values;
        let n = g.n();
        let dnu = g.dnu();
        let out: Vec<C64> = (0..n)
            .into_par_iter()
            .map(|x| {
                let row = self.symbol_row(g.centered(x));
                let mut acc = C64::new(0.0, 0.0);
                for (k, (s, fv)) in row.iter().zip(&fh).enumerate() {
                    acc += s * fv * self.geo.root((k * x) as i64);
                }
                acc * dnu
            })
            .collect();
        SampledSignal::new(g, 0, out)
    }

    fn apply_adjoint(&self, f: &SampledSignal) -> Result<SampledSignal> {
        let g = self.grid;
        g.check_same(&f.grid, "adjoint apply")?;
        let fv = f.normalized().values;
        let n = g.n();
        let out = (0..n)
            .into_par_iter()
            .fold(
                || vec![C64::new(0.0, 0.0); n],
                |mut acc, x| {
                    if fv[x].norm() > 0.0 {
                        let h = self.impulse_row(g.centered(x));
                        for (y, a) in acc.iter_mut().enumerate() {
                            *a += h[(x + n - y) % n].conj() * fv[x];
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![C64::new(0.0, 0.0); n],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        SampledSignal::new(g, 0, out.into_iter().map(|v| v * g.dt).collect())
    }

    fn for_each_symbol_row(&self, visit: &mut dyn FnMut(usize, &[C64])) -> Result<()> {
        let g = self.grid;
        for x in 0..g.n() {
            visit(x, &self.symbol_row(g.centered(x)));
        }
        Ok(())
    }
}

/// Operator built from the table, optionally restricted to atoms whose
/// position satisfies `subset`.
pub fn operator_from_coefficients(
    table: &CoefficientTable,
    subset: Option<&dyn Fn(f64, f64) -> bool>,
) -> Result<CoefficientOperator> {
    match subset {
        Some(keep) => CoefficientOperator::new(&table.restricted(keep)),
        None => CoefficientOperator::new(table),
    }
}

/// Symbol estimate on the rows of `rows` and the full dual grid.
pub fn symbol_from_coefficients(
    table: &CoefficientTable,
    subset: Option<&dyn Fn(f64, f64) -> bool>,
    rows: Axis,
) -> Result<PlaneArray> {
    let op = operator_from_coefficients(table, subset)?;
    let g = op.grid;
    g.check_same(&rows.grid, "symbol rows")?;
    let mut p = PlaneArray::zeros(rows, Axis::full(g.dual()), Semantics::Symbol)?;
    let computed: Vec<Vec<C64>> = (0..rows.len).into_par_iter().map(|i| op.symbol_row(rows.raw(i))).collect();
    let n = g.n();
    for (i, row) in computed.into_iter().enumerate() {
        p.values[i * n..(i + 1) * n].copy_from_slice(&row);
    }
    Ok(p)
}
