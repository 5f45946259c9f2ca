//! Continuous-time reference operators on the circle of length P.
//!
//! η(t, γ_k) = Σ_b u_b(t) v_b[k] with u_b a cubic B-spline in t and γ_k = k/P.
//! Responses to Dirac trains, actions on trigonometric polynomials and the
//! symbol are evaluated in closed form, independently of any sampling.

use crate::error::{Error, Result};
use crate::identify::SamplingScheme;
use crate::operators::{BandlimitedOperator, SupportRegion};
use crate::tfcore::{cis, Axis, GridSpec, PlaneArray, SampledSignal, Semantics, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Cardinal cubic B-spline on [0, 4].
pub fn cubic_bspline(s: f64) -> f64 {
    if !(0.0..4.0).contains(&s) {
        return 0.0;
    }
    if s < 1.0 {
        s * s * s / 6.0
    } else if s < 2.0 {
        (-3.0 * s * s * s + 12.0 * s * s - 12.0 * s + 4.0) / 6.0
    } else if s < 3.0 {
        (3.0 * s * s * s - 24.0 * s * s + 60.0 * s - 44.0) / 6.0
    } else {
        let u = 4.0 - s;
        u * u * u / 6.0
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Rectangle of the spreading support: t ∈ [t0, t1], γ ∈ [g0, g1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub t0: f64,
    pub t1: f64,
    pub g0: f64,
    pub g1: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Piece {
    start: f64,
    h: f64,
    /// (k, v_b[k])
    coeffs: Vec<(i64, C64)>,
}

impl Piece {
    fn u(&self, t: f64) -> f64 {
        cubic_bspline((t - self.start) / self.h)
    }

    fn u_hat(&self, xi: f64) -> C64 {
        let s = sinc(PI * xi * self.h);
        cis(-TAU * xi * (self.start + 2.0 * self.h)) * (self.h * s * s * s * s)
    }

    fn end(&self) -> f64 {
        self.start + 4.0 * self.h
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplineOperator {
    pub period: f64,
    pub blocks: Vec<Block>,
    pieces: Vec<Piece>,
}

impl SplineOperator {
    /// `splines` B-splines per block spanning [t0, t1] exactly, with
    /// independent complex Gaussian weights on every frequency k/P in
    /// [g0, g1].
    pub fn random(blocks: &[Block], splines: usize, period: f64, seed: u64) -> Result<Self> {
        if splines == 0 || !(period > 0.0) {
            return Err(Error::InvalidParameter("need at least one spline and a positive period".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pieces = Vec::new();
        for b in blocks {
            if !(b.t1 > b.t0 && b.g1 >= b.g0) {
                return Err(Error::InvalidParameter(format!("empty block {b:?}")));
            }
            let h = (b.t1 - b.t0) / (splines + 3) as f64;
            let k0 = (b.g0 * period - 1e-9).ceil() as i64;
            let k1 = (b.g1 * period + 1e-9).floor() as i64;
            if k1 < k0 {
                return Err(Error::InvalidParameter(format!("block {b:?} holds no frequency k/P")));
            }
            for s in 0..splines {
                let coeffs = (k0..=k1)
                    .map(|k| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        (k, C64::new(re, im))
                    })
                    .collect();
                pieces.push(Piece { start: b.t0 + s as f64 * h, h, coeffs });
            }
        }
        Ok(Self { period, blocks: blocks.to_vec(), pieces })
    }

    pub fn dnu(&self) -> f64 {
        1.0 / self.period
    }

    pub fn eta(&self, t: f64, k: i64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for p in &self.pieces {
            let u = p.u(t);
            if u != 0.0 {
                if let Some(&(_, v)) = p.coeffs.iter().find(|c| c.0 == k) {
                    acc += v * u;
                }
            }
        }
        acc
    }

    // V_b(x) = dν Σ_k v_b[k] e^{2πikx/P}
    fn v(&self, p: &Piece, x: f64) -> C64 {
        let d = self.dnu();
        p.coeffs.iter().map(|&(k, c)| c * cis(TAU * k as f64 * x * d)).sum::<C64>() * d
    }

    fn v_on_grid(&self, p: &Piece, grid: &GridSpec) -> Vec<C64> {
        let n = grid.n() as i64;
        let roots = crate::tfcore::unit_roots(grid.n());
        (0..n)
            .map(|x| p.coeffs.iter().map(|&(k, c)| c * roots[(k * x).rem_euclid(n) as usize]).sum::<C64>() * self.dnu())
            .collect()
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if ((grid.duration() - self.period) / self.period).abs() > 1e-12 {
            return Err(Error::GridMismatch(format!(
                "reference period {} vs grid period {}",
                self.period,
                grid.duration()
            )));
        }
        Ok(())
    }

    /// h(x, t) = Σ_k η(t, γ_k) e^{2πiγ_k x} dν
    pub fn impulse(&self, x: f64, t: f64) -> C64 {
        self.pieces.iter().map(|p| self.v(p, x) * p.u(t)).sum()
    }

    /// σ(x, ξ) = Σ_b V_b(x) û_b(ξ).
    pub fn symbol(&self, x: f64, xi: f64) -> C64 {
        self.pieces.iter().map(|p| self.v(p, x) * p.u_hat(xi)).sum()
    }

    /// σ on the rows of `rows` and the full dual grid.
    pub fn symbol_rows(&self, rows: Axis) -> Result<PlaneArray> {
        let grid = rows.grid;
        self.check_grid(&grid)?;
        let dual = grid.dual();
        let mut p = PlaneArray::zeros(rows, Axis::full(dual), Semantics::Symbol)?;
        let uh: Vec<Vec<C64>> =
            self.pieces.iter().map(|pc| (0..dual.n()).map(|k| pc.u_hat(dual.coord(k))).collect()).collect();
        let n = dual.n();
        for i in 0..rows.len {
            let x = rows.raw(i) as f64 * grid.dt;
            let vs: Vec<C64> = self.pieces.iter().map(|pc| self.v(pc, x)).collect();
            let row = &mut p.values[i * n..(i + 1) * n];
            for (v, u) in vs.iter().zip(&uh) {
                for (o, a) in row.iter_mut().zip(u) {
                    *o += v * a;
                }
            }
        }
        Ok(p)
    }

    /// H w sampled on `grid`, for w = Σ_n c_n δ_{nT − t₀} with true Dirac deltas.
    pub fn train_response(&self, scheme: &SamplingScheme, grid: GridSpec) -> Result<SampledSignal> {
        self.check_grid(&grid)?;
        let n = grid.n() as i64;
        let count = (self.period / scheme.t_period).round() as i64;
        let mut out = vec![C64::new(0.0, 0.0); n as usize];
        for p in &self.pieces {
            let v = self.v_on_grid(p, &grid);
            for m in -count / 2..count - count / 2 {
                let pos = m as f64 * scheme.t_period - scheme.origin_t;
                let c = scheme.c_coeff(m);
                let lo = ((pos + p.start) / grid.dt).floor() as i64;
                let hi = ((pos + p.end()) / grid.dt).ceil() as i64;
                for x in lo..=hi {
                    let u = p.u(x as f64 * grid.dt - pos);
                    if u != 0.0 {
                        let idx = x.rem_euclid(n) as usize;
                        out[idx] += c * u * v[idx];
                    }
                }
            }
        }
        SampledSignal::new(grid, 0, out)
    }

    /// H f sampled on `grid` for a trigonometric polynomial f.
    pub fn apply_trig(&self, f: &TrigProbe, grid: GridSpec) -> Result<SampledSignal> {
        self.check_grid(&grid)?;
        let mut out = vec![C64::new(0.0, 0.0); grid.n()];
        for p in &self.pieces {
            let v = self.v_on_grid(p, &grid);
            let weights: Vec<(f64, C64)> = f.terms.iter().map(|&(xi, a)| (xi, a * p.u_hat(xi))).collect();
            for (i, o) in out.iter_mut().enumerate() {
                let x = grid.coord(i);
                let s: C64 = weights.iter().map(|&(xi, w)| w * cis(TAU * xi * x)).sum();
                *o += v[i] * s;
            }
        }
        SampledSignal::new(grid, 0, out)
    }

    /// η sampled on the grid points of its support.
    pub fn discretize(&self, grid: GridSpec) -> Result<BandlimitedOperator> {
        self.check_grid(&grid)?;
        let mut cells = Vec::new();
        for p in &self.pieces {
            let lo = (p.start / grid.dt).floor() as i64;
            let hi = (p.end() / grid.dt).ceil() as i64;
            for t in lo..=hi {
                if p.u(t as f64 * grid.dt) != 0.0 {
                    cells.extend(p.coeffs.iter().map(|&(k, _)| (t, k)));
                }
            }
        }
        let support = SupportRegion::from_cells(grid, cells);
        let dual = grid.dual();
        let eta = support.cells.iter().map(|&(t, k)| self.eta(grid.coord(t), dual.centered(k))).collect();
        BandlimitedOperator::new(support, eta)
    }
}

/// f(x) = Σ a_s e^{2πiξ_s x} with ξ_s on the frequency grid of the circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigProbe {
    pub terms: Vec<(f64, C64)>,
}

impl TrigProbe {
    pub fn random(terms: usize, max_freq: f64, period: f64, seed: u64) -> Self {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kmax = (max_freq * period).floor() as i64;
        let terms = (0..terms)
            .map(|_| {
                let k = rng.gen_range(-kmax..=kmax);
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                (k as f64 / period, C64::new(re, im))
            })
            .collect();
        Self { terms }
    }

    pub fn sample(&self, grid: GridSpec) -> SampledSignal {
        SampledSignal::from_fn(grid, |x| self.terms.iter().map(|&(xi, a)| a * cis(TAU * xi * x)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identify::make_weights;
    use crate::operators::{Operator, Representation};

    fn op() -> SplineOperator {
        // knots on every grid used below
        let blocks = [Block { t0: 0.125, t1: 0.875, g0: -0.3, g1: 0.3 }];
        SplineOperator::random(&blocks, 3, 8.0, 1).unwrap()
    }

    #[test]
    fn bspline_partition_and_mass() {
        for &s in &[0.0, 0.3, 0.77] {
            let sum: f64 = (-4..4).map(|k| cubic_bspline(s + k as f64)).sum();
            assert!((sum - 1.0).abs() < 1e-14);
        }
        let m: f64 = (0..40000).map(|i| cubic_bspline((i as f64 + 0.5) * 1e-4)).sum::<f64>() * 1e-4;
        assert!((m - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spline_transform_matches_quadrature() {
        let p = Piece { start: 0.2, h: 0.1, coeffs: vec![] };
        for &xi in &[0.0, 1.3, -4.2] {
            let q: C64 = (0..100000)
                .map(|i| {
                    let t = (i as f64 + 0.5) * 1e-5;
                    cis(-TAU * xi * t) * p.u(t)
                })
                .sum::<C64>()
                * 1e-5;
            assert!((q - p.u_hat(xi)).norm() < 1e-8, "{xi}");
        }
    }

    #[test]
    fn discretization_converges() {
        let o = op();
        let f = TrigProbe::random(6, 2.0, 8.0, 3);
        let mut errs = Vec::new();
        for dt_inv in [16usize, 32, 64] {
            let g = GridSpec::new(1.0 / dt_inv as f64, dt_inv, 1, 8).unwrap();
            let d = o.discretize(g).unwrap();
            let a = d.apply(&f.sample(g)).unwrap();
            let b = o.apply_trig(&f, g).unwrap();
            errs.push(a.rel_err(&b).unwrap());
        }
        assert!(errs[0] < 1e-2 && errs[1] < errs[0] / 12.0 && errs[2] < errs[1] / 12.0, "{errs:?}");
    }

    #[test]
    fn train_response_is_the_sampled_kernel_sum() {
        let o = op();
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 8).unwrap();
        let s = SamplingScheme::geometry(1, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0)]).unwrap();
        let s = make_weights(&s, 0).unwrap();
        let w = crate::identify::realize_identifier(&s, g, None, None).unwrap();
        let d = o.discretize(g).unwrap();
        let a = d.apply(&w.signal).unwrap();
        let b = o.train_response(&s, g).unwrap();
        assert!(a.rel_err(&b).unwrap() < 1e-12);
    }

    #[test]
    fn symbol_rows_match_discrete_symbol_at_low_frequency() {
        let o = op();
        let g = GridSpec::new(1.0 / 64.0, 64, 1, 8).unwrap();
        let d = o.discretize(g).unwrap().convert(Representation::Symbol).unwrap();
        let p = o.symbol_rows(Axis::span(g, 5, 1)).unwrap();
        for k in 0..40 {
            assert!((p.get(0, k) - d.get(5, k)).norm() < 1e-4 * d.max_abs());
        }
        assert!((o.symbol(5.0 / 64.0, 0.25) - p.get(0, 2)).norm() < 1e-12);
    }
}
