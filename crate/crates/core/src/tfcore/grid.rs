use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance used when deciding whether a coordinate sits on the grid.
pub const ALIGN_TOL: f64 = 1e-9;

/// Number of `step`s in `value`, or an error if `value` is off the lattice.
pub fn steps_of(what: &str, value: f64, step: f64) -> Result<i64> {
    let q = value / step;
    let r = q.round();
    if (q - r).abs() > ALIGN_TOL * r.abs().max(1.0) {
        return Err(Error::Misaligned { what: what.to_string(), value, step });
    }
    Ok(r as i64)
}

/// Uniform periodic grid. The circle has `l * n_per_t * periods` samples of
/// width `dt`; `n_per_t` samples make one identifier period T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dt: f64,
    pub n_per_t: usize,
    pub l: usize,
    pub periods: usize,
}

impl GridSpec {
    pub fn new(dt: f64, n_per_t: usize, l: usize, periods: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if n_per_t == 0 || l == 0 || periods == 0 {
            return Err(Error::InvalidParameter(
                "n_per_t, l and periods must be positive".into(),
            ));
        }
        Ok(Self { dt, n_per_t, l, periods })
    }

    /// Grid for period `t_period` sampled at `dt`, with `periods` blocks of
    /// length `l * t_period`.
    pub fn for_period(t_period: f64, dt: f64, l: usize, periods: usize) -> Result<Self> {
        let n = steps_of("T", t_period, dt)?;
        if n <= 0 {
            return Err(Error::InvalidParameter("T must be positive".into()));
        }
        Self::new(dt, n as usize, l, periods)
    }

    pub fn n(&self) -> usize {
        self.l * self.n_per_t * self.periods
    }

    /// Identifier period T.
    pub fn t_period(&self) -> f64 {
        self.dt * self.n_per_t as f64
    }

    /// Circumference of the circle.
    pub fn duration(&self) -> f64 {
        self.dt * self.n() as f64
    }

    pub fn dnu(&self) -> f64 {
        1.0 / self.duration()
    }

    /// Frequency grid. Its `dt` is dν, its period is Ω = 1/(LT) and it wraps
    /// after N samples. The dual of the dual is the original grid.
    pub fn dual(&self) -> GridSpec {
        GridSpec { dt: self.dnu(), n_per_t: self.periods, l: self.l, periods: self.n_per_t }
    }

    /// Same circle, `factor` times finer sampling.
    pub fn refined(&self, factor: usize) -> GridSpec {
        GridSpec { dt: self.dt / factor as f64, n_per_t: self.n_per_t * factor, ..*self }
    }

    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.n() == other.n() && ((self.dt - other.dt) / self.dt).abs() < 1e-12
    }

    pub fn check_same(&self, other: &GridSpec, ctx: &str) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{ctx}: {self:?} vs {other:?}")))
        }
    }

    /// Signed number of steps in `value`; rejects off-grid values.
    pub fn steps(&self, what: &str, value: f64) -> Result<i64> {
        steps_of(what, value, self.dt)
    }

    pub fn wrap(&self, i: i64) -> usize {
        i.rem_euclid(self.n() as i64) as usize
    }

    /// Index of a grid-aligned coordinate, wrapped onto the circle.
    pub fn index_of(&self, value: f64) -> Result<usize> {
        Ok(self.wrap(self.steps("coordinate", value)?))
    }

    /// Signed representative of an index in [-N/2, N/2).
    pub fn centered(&self, idx: usize) -> i64 {
        let n = self.n() as i64;
        let i = idx as i64 % n;
        if i >= (n + 1) / 2 {
            i - n
        } else {
            i
        }
    }

    /// Coordinate of an index, taken in [-P/2, P/2).
    pub fn coord(&self, idx: usize) -> f64 {
        self.centered(idx) as f64 * self.dt
    }
}

/// One axis of a [`PlaneArray`](super::PlaneArray): `len` samples of `grid`
/// starting at signed index `first` with the given stride.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub grid: GridSpec,
    pub first: i64,
    pub stride: usize,
    pub len: usize,
}

impl Axis {
    pub fn full(grid: GridSpec) -> Self {
        Self { grid, first: 0, stride: 1, len: grid.n() }
    }

    pub fn span(grid: GridSpec, first: i64, len: usize) -> Self {
        Self { grid, first, stride: 1, len }
    }

    pub fn is_full(&self) -> bool {
        self.first == 0 && self.stride == 1 && self.len == self.grid.n()
    }

    /// Signed grid index of the j-th sample.
    pub fn raw(&self, j: usize) -> i64 {
        self.first + (j * self.stride) as i64
    }

    pub fn index(&self, j: usize) -> usize {
        self.grid.wrap(self.raw(j))
    }

    /// Coordinate of the j-th sample, unwrapped (monotone in j).
    pub fn coord(&self, j: usize) -> f64 {
        self.raw(j) as f64 * self.grid.dt
    }

    /// Position of a signed grid index on this axis, if it is sampled.
    pub fn position(&self, raw: i64) -> Option<usize> {
        let n = self.grid.n() as i64;
        let d = (raw - self.first).rem_euclid(n);
        let s = self.stride as i64;
        if d % s != 0 {
            return None;
        }
        let j = (d / s) as usize;
        (j < self.len).then_some(j)
    }
}
