use crate::error::{Error, Result};
use crate::tfcore::{fft, GridSpec, SampledSignal, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Gabor system {M_{ℓb} T_{ka} g} on the periodic grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaborFrameSpec {
    pub g: SampledSignal,
    pub a: f64,
    pub b: f64,
    pub declared_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Coefficients ⟨f, M_{ℓb} T_{ka} g⟩, row-major over (k, ℓ).
#[derive(Debug, Clone)]
pub struct GaborCoefficients {
    pub n_k: usize,
    pub n_l: usize,
    pub values: Vec<C64>,
}

impl GaborCoefficients {
    pub fn get(&self, k: usize, l: usize) -> C64 {
        self.values[k * self.n_l + l]
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

impl GaborFrameSpec {
    pub fn new(g: SampledSignal, a: f64, b: f64, declared_bound: f64) -> Result<Self> {
        let spec = Self { g, a, b, declared_bound };
        spec.lattice()?;
        Ok(spec)
    }

    pub fn grid(&self) -> GridSpec {
        self.g.grid
    }

    /// (time step in samples, number of time positions, number of frequencies).
    pub fn lattice(&self) -> Result<(usize, usize, usize)> {
        let g = self.g.grid;
        let n = g.n();
        let ma = g.steps("a", self.a)?;
        let mb = g.dual().steps("b", self.b)?;
        if ma <= 0 || mb <= 0 || n % ma as usize != 0 || n % mb as usize != 0 {
            return Err(Error::InvalidParameter(format!(
                "lattice steps a = {}, b = {} must divide the grid",
                self.a, self.b
            )));
        }
        Ok((ma as usize, n / ma as usize, n / mb as usize))
    }

    fn taps(&self) -> Vec<(i64, C64)> {
        let n = self.g.len();
        (0..n)
            .map(|i| self.g.grid.centered(i))
            .map(|k| (k, self.g.at(k)))
            .filter(|(_, v)| *v != C64::new(0.0, 0.0))
            .collect()
    }

    pub fn analysis(&self, f: &SampledSignal) -> Result<GaborCoefficients> {
        f.grid.check_same(&self.g.grid, "Gabor analysis")?;
        let (ma, n_k, n_l) = self.lattice()?;
        let taps = self.taps();
        let fv = f.normalized().values;
        let grid = f.grid;
        let mut values = vec![C64::new(0.0, 0.0); n_k * n_l];
        let mut buf = vec![C64::new(0.0, 0.0); n_l];
        for k in 0..n_k {
            buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            let x = (k * ma) as i64;
            for &(o, gv) in &taps {
                let s = grid.wrap(x + o);
                buf[s % n_l] += fv[s] * gv.conj();
            }
            fft::forward(&mut buf);
            for (l, v) in buf.iter().enumerate() {
                values[k * n_l + l] = v * grid.dt;
            }
        }
        Ok(GaborCoefficients { n_k, n_l, values })
    }

    pub fn synthesis(&self, c: &GaborCoefficients) -> Result<SampledSignal> {
        let (ma, n_k, n_l) = self.lattice()?;
        if c.n_k != n_k || c.n_l != n_l {
            return Err(Error::GridMismatch("coefficient array does not match the lattice".into()));
        }
        let grid = self.g.grid;
        let taps = self.taps();
        let mut out = SampledSignal::zeros(grid);
        let mut buf = vec![C64::new(0.0, 0.0); n_l];
        for k in 0..n_k {
            buf.copy_from_slice(&c.values[k * n_l..(k + 1) * n_l]);
            fft::inverse(&mut buf);
            let x = (k * ma) as i64;
            for &(o, gv) in &taps {
                let s = grid.wrap(x + o);
                out.values[s] += buf[s % n_l] * gv;
            }
        }
        Ok(out)
    }

    /// S f = Σ_λ ⟨f, π(λ)g⟩ π(λ)g.
    pub fn frame_operator(&self, f: &SampledSignal) -> Result<SampledSignal> {
        self.synthesis(&self.analysis(f)?)
    }

    /// Same system with g scaled so that the lower frame bound is 1.
    pub fn normalized_tight(&self, seed: u64) -> Result<GaborFrameSpec> {
        let fb = frame_bounds(self, seed)?;
        let g = self.g.scaled(C64::new(1.0 / fb.lower.sqrt(), 0.0));
        Ok(GaborFrameSpec { g, a: self.a, b: self.b, declared_bound: 1.0 })
    }
}

const MAX_ITER: usize = 20_000;
/// Relative stagnation of the Rayleigh quotient used for frame bounds.
pub const FRAME_TOL: f64 = 1e-10;

pub(crate) fn random_probe(grid: GridSpec, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..grid.n()).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect()
}

fn unit(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Largest eigenvalue of a Hermitian positive semidefinite map by power
/// iteration, stopping when the Rayleigh quotient stagnates.
pub fn power_iteration(
    n: usize,
    tol: f64,
    mut start: Vec<C64>,
    mut apply: impl FnMut(&[C64]) -> Result<Vec<C64>>,
) -> Result<(f64, usize)> {
    assert_eq!(start.len(), n);
    unit(&mut start);
    let mut prev = f64::NAN;
    for it in 1..=MAX_ITER {
        let mut y = apply(&start)?;
        let lambda: f64 = y.iter().zip(&start).map(|(a, b)| (a * b.conj()).re).sum();
        if unit(&mut y) == 0.0 {
            return Ok((0.0, it));
        }
        if (lambda - prev).abs() <= tol * lambda.abs().max(f64::MIN_POSITIVE) {
            return Ok((lambda, it));
        }
        prev = lambda;
        start = y;
    }
    Ok((prev, MAX_ITER))
}

/// Extreme eigenvalues (A, B) of the frame operator.
pub fn frame_bounds(spec: &GaborFrameSpec, seed: u64) -> Result<FrameBounds> {
    if spec.g.max_abs() == 0.0 {
        return Err(Error::Degenerate("window is identically zero".into()));
    }
    let grid = spec.g.grid;
    let n = grid.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = |v: &[C64]| -> Result<Vec<C64>> {
        let f = SampledSignal::new(grid, 0, v.to_vec())?;
        Ok(spec.frame_operator(&f)?.values)
    };
    let (upper, it1) = power_iteration(n, FRAME_TOL, random_probe(grid, &mut rng), op)?;
    let shifted = |v: &[C64]| -> Result<Vec<C64>> {
        let s = op(v)?;
        Ok(v.iter().zip(&s).map(|(x, y)| x * upper - y).collect())
    };
    let (gap, it2) = power_iteration(n, FRAME_TOL, random_probe(grid, &mut rng), shifted)?;
    let lower = (upper - gap).max(0.0);
    Ok(FrameBounds { lower, upper, iterations: it1 + it2 })
}
