use super::grid::GridSpec;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Uniformly sampled complex function on the circle described by `grid`.
/// Sample `i` sits at coordinate `(i - origin_index) * dt`, modulo N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub grid: GridSpec,
    pub origin_index: usize,
    pub values: Vec<C64>,
}

impl SampledSignal {
    pub fn new(grid: GridSpec, origin_index: usize, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.n()
            )));
        }
        if origin_index >= grid.n() {
            return Err(Error::InvalidParameter(format!("origin index {origin_index} out of range")));
        }
        Ok(Self { grid, origin_index, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, origin_index: 0, values: vec![ZERO; grid.n()] }
    }

    /// Samples `f` at the centered coordinates of the grid (origin at index 0).
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.n()).map(|i| f(grid.coord(i))).collect();
        Self { grid, origin_index: 0, values }
    }

    pub fn from_real_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| C64::new(f(t), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same function with its origin moved to index 0.
    pub fn normalized(&self) -> SampledSignal {
        if self.origin_index == 0 {
            return self.clone();
        }
        let n = self.len();
        let values = (0..n).map(|i| self.values[(i + self.origin_index) % n]).collect();
        SampledSignal { grid: self.grid, origin_index: 0, values }
    }

    /// Value at the signed sample offset `k` from the origin (wrapped).
    pub fn at(&self, k: i64) -> C64 {
        self.values[self.grid.wrap(k + self.origin_index as i64)]
    }

    /// Value at a grid-aligned coordinate.
    pub fn at_coord(&self, t: f64) -> Result<C64> {
        Ok(self.at(self.grid.steps("t", t)?))
    }

    /// Riemann-sum inner product dt * sum a conj(b).
    pub fn inner(&self, other: &SampledSignal) -> Result<C64> {
        self.grid.check_same(&other.grid, "inner product")?;
        let a = self.normalized();
        let b = other.normalized();
        let s: C64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y.conj()).sum();
        Ok(s * self.grid.dt)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dt
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: C64) -> SampledSignal {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Pointwise combination after aligning origins.
    pub fn zip_with(
        &self,
        other: &SampledSignal,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<SampledSignal> {
        self.grid.check_same(&other.grid, "pointwise combination")?;
        let a = self.normalized();
        let b = other.normalized();
        let values = a.values.iter().zip(&b.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(SampledSignal { grid: self.grid, origin_index: 0, values })
    }

    pub fn sub(&self, other: &SampledSignal) -> Result<SampledSignal> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn add(&self, other: &SampledSignal) -> Result<SampledSignal> {
        self.zip_with(other, |x, y| x + y)
    }

    /// Relative distance ||self - other|| / ||other||.
    pub fn rel_err(&self, reference: &SampledSignal) -> Result<f64> {
        let d = self.sub(reference)?.norm();
        let r = reference.norm();
        Ok(if r == 0.0 { d } else { d / r })
    }

    /// Translation by `k` samples: out(t) = self(t - k dt).
    pub fn shifted(&self, k: i64) -> SampledSignal {
        let s = self.normalized();
        let n = self.len();
        let values = (0..n).map(|i| s.values[self.grid.wrap(i as i64 - k)]).collect();
        SampledSignal { grid: self.grid, origin_index: 0, values }
    }

    /// Modulation by a grid frequency `m` dν: out(t) = e^{2 pi i m dν t} self(t).
    pub fn modulated(&self, m: i64) -> SampledSignal {
        let s = self.normalized();
        let n = self.len() as i64;
        let values = s
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * cis(2.0 * std::f64::consts::PI * ((m * i as i64).rem_euclid(n)) as f64 / n as f64))
            .collect();
        SampledSignal { grid: self.grid, origin_index: 0, values }
    }
}

pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// Table of e^{2 pi i j / n} for j in 0..n.
pub fn unit_roots(n: usize) -> Vec<C64> {
    (0..n).map(|j| cis(2.0 * std::f64::consts::PI * j as f64 / n as f64)).collect()
}
