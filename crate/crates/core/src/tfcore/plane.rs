use super::grid::{Axis, GridSpec};
use super::signal::{C64, ZERO};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest dense plane we are willing to allocate.
pub const MAX_DENSE: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    /// (t, γ): spreading function and its chirped variant.
    TimeFreq,
    /// (x, ξ): Kohn-Nirenberg symbol.
    Symbol,
    /// (x, y): Schwartz kernel.
    Kernel,
    /// (x, t): time-varying impulse response.
    Impulse,
}

/// Row-major complex array over two axes; `values[i * y.len + j]` sits at
/// (x.coord(i), y.coord(j)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneArray {
    pub x: Axis,
    pub y: Axis,
    pub semantics: Semantics,
    pub values: Vec<C64>,
}

impl PlaneArray {
    pub fn zeros(x: Axis, y: Axis, semantics: Semantics) -> Result<Self> {
        let n = x.len.checked_mul(y.len).ok_or(Error::TooLarge(usize::MAX))?;
        if n > MAX_DENSE {
            return Err(Error::TooLarge(n));
        }
        Ok(Self { x, y, semantics, values: vec![ZERO; n] })
    }

    /// Full (t, γ) or (x, ξ) plane over `grid` and its dual.
    pub fn full(grid: GridSpec, semantics: Semantics) -> Result<Self> {
        let y = match semantics {
            Semantics::TimeFreq | Semantics::Symbol => grid.dual(),
            Semantics::Kernel | Semantics::Impulse => grid,
        };
        Self::zeros(Axis::full(grid), Axis::full(y), semantics)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.len, self.y.len)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.y.len + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.values[i * self.y.len + j]
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.values[i * self.y.len..(i + 1) * self.y.len]
    }

    /// Value at signed grid indices, zero if the point is not stored.
    pub fn at_raw(&self, xi: i64, yi: i64) -> C64 {
        match (self.x.position(xi), self.y.position(yi)) {
            (Some(i), Some(j)) => self.get(i, j),
            _ => ZERO,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Riemann-weighted L2 norm.
    pub fn norm(&self) -> f64 {
        let w = self.x.grid.dt * self.x.stride as f64 * self.y.grid.dt * self.y.stride as f64;
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    pub fn same_layout(&self, other: &PlaneArray) -> bool {
        self.x.len == other.x.len
            && self.y.len == other.y.len
            && self.x.first == other.x.first
            && self.y.first == other.y.first
            && self.x.stride == other.x.stride
            && self.y.stride == other.y.stride
            && self.x.grid.same_as(&other.x.grid)
            && self.y.grid.same_as(&other.y.grid)
    }

    /// max |self - other| / max |other| on a shared layout.
    pub fn rel_linf(&self, reference: &PlaneArray) -> Result<f64> {
        if !self.same_layout(reference) {
            return Err(Error::GridMismatch("planes have different layouts".into()));
        }
        let d = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let r = reference.max_abs();
        Ok(if r == 0.0 { d } else { d / r })
    }

    pub fn scale(&mut self, s: C64) {
        self.values.iter_mut().for_each(|v| *v *= s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_axes_lookup() {
        let g = GridSpec::new(0.5, 2, 1, 4).unwrap();
        let mut p = PlaneArray::zeros(Axis::full(g), Axis::span(g, -2, 5), Semantics::Impulse).unwrap();
        *p.get_mut(3, 0) = C64::new(1.0, 0.0);
        assert_eq!(p.at_raw(3, -2).re, 1.0);
        assert_eq!(p.at_raw(3, 6).re, 1.0); // -2 wraps to 6
        assert_eq!(p.at_raw(3, 3).re, 0.0);
    }

    #[test]
    fn oversized_planes_are_refused() {
        let g = GridSpec::new(1.0, 8192, 1, 1).unwrap();
        assert!(matches!(PlaneArray::full(g, Semantics::Symbol), Err(Error::TooLarge(_))));
    }
}
