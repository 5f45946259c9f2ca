use crate::error::{Error, Result};
use crate::tfcore::GridSpec;
use serde::{Deserialize, Serialize};

/// Finite set of (t, γ) grid points. `cells` holds wrapped indices
/// (t index on the grid, γ index on its dual), sorted and unique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportRegion {
    pub grid: GridSpec,
    pub cells: Vec<(usize, usize)>,
    /// [t_min, t_max, γ_min, γ_max] of the points, centered coordinates.
    pub bounding_box: [f64; 4],
    /// Riemann measure: number of points times dt dν.
    pub area: f64,
}

/// Closed rectangle [t0, t1] × [g0, g1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub t0: f64,
    pub t1: f64,
    pub g0: f64,
    pub g1: f64,
}

impl Rect {
    pub fn new(t0: f64, t1: f64, g0: f64, g1: f64) -> Self {
        Self { t0, t1, g0, g1 }
    }

    pub fn area(&self) -> f64 {
        (self.t1 - self.t0).max(0.0) * (self.g1 - self.g0).max(0.0)
    }

    pub fn contains(&self, t: f64, g: f64) -> bool {
        t >= self.t0 && t <= self.t1 && g >= self.g0 && g <= self.g1
    }
}

// index range of grid points inside [lo, hi], with a small tolerance
fn index_range(lo: f64, hi: f64, step: f64) -> (i64, i64) {
    let a = (lo / step - 1e-9).ceil() as i64;
    let b = (hi / step + 1e-9).floor() as i64;
    (a, b)
}

impl SupportRegion {
    pub fn from_cells(grid: GridSpec, cells: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let n = grid.n();
        let mut v: Vec<(usize, usize)> = cells.into_iter().map(|(t, g)| (grid.wrap(t), grid.wrap(g))).collect();
        v.sort_unstable();
        v.dedup();
        let d = grid.dual();
        let mut bb = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for &(t, g) in &v {
            let (x, y) = (grid.coord(t), d.coord(g));
            bb = [bb[0].min(x), bb[1].max(x), bb[2].min(y), bb[3].max(y)];
        }
        if v.is_empty() {
            bb = [0.0; 4];
        }
        let area = v.len() as f64 / n as f64;
        Self { grid, cells: v, bounding_box: bb, area }
    }

    pub fn empty(grid: GridSpec) -> Self {
        Self::from_cells(grid, std::iter::empty())
    }

    /// Grid points of a union of closed rectangles.
    pub fn from_rects(grid: GridSpec, rects: &[Rect]) -> Self {
        let dnu = grid.dnu();
        let mut cells = Vec::new();
        for r in rects {
            let (ta, tb) = index_range(r.t0, r.t1, grid.dt);
            let (ga, gb) = index_range(r.g0, r.g1, dnu);
            for t in ta..=tb {
                for g in ga..=gb {
                    cells.push((t, g));
                }
            }
        }
        Self::from_cells(grid, cells)
    }

    pub fn rect(grid: GridSpec, t0: f64, t1: f64, g0: f64, g1: f64) -> Self {
        Self::from_rects(grid, &[Rect::new(t0, t1, g0, g1)])
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, t: i64, g: i64) -> bool {
        self.cells.binary_search(&(self.grid.wrap(t), self.grid.wrap(g))).is_ok()
    }

    pub fn position(&self, t: usize, g: usize) -> Option<usize> {
        self.cells.binary_search(&(t, g)).ok()
    }

    /// Box neighborhood: all points within `pad_t` in time and `pad_nu` in
    /// frequency of some point of the region.
    pub fn neighborhood(&self, pad_t: f64, pad_nu: f64) -> Self {
        let rt = (pad_t / self.grid.dt + 1e-9).floor() as i64;
        let rg = (pad_nu / self.grid.dnu() + 1e-9).floor() as i64;
        let mut cells = Vec::with_capacity(self.cells.len());
        for &(t, g) in &self.cells {
            for dt in -rt..=rt {
                for dg in -rg..=rg {
                    cells.push((t as i64 + dt, g as i64 + dg));
                }
            }
        }
        Self::from_cells(self.grid, cells)
    }

    /// Translate by (t, γ) grid steps.
    pub fn shifted(&self, t: i64, g: i64) -> Self {
        Self::from_cells(self.grid, self.cells.iter().map(|&(a, b)| (a as i64 + t, b as i64 + g)))
    }

    /// Point reflection (t, γ) ↦ (−t, −γ).
    pub fn reflected(&self) -> Self {
        Self::from_cells(self.grid, self.cells.iter().map(|&(a, b)| (-(a as i64), -(b as i64))))
    }

    pub fn is_subset_of(&self, other: &SupportRegion) -> bool {
        self.cells.iter().all(|c| other.cells.binary_search(c).is_ok())
    }

    /// Cells grouped by time index, in increasing order.
    pub fn rows(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for &(t, g) in &self.cells {
            match out.last_mut() {
                Some((tt, v)) if *tt == t => v.push(g),
                _ => out.push((t, vec![g])),
            }
        }
        out
    }

    /// Identification needs measure below one.
    pub fn check_area(&self) -> Result<()> {
        if self.area >= 1.0 {
            return Err(Error::InvalidParameter(format!("support area {} is not below 1", self.area)));
        }
        Ok(())
    }

    /// Run-length encoding per time row: (t index, [[γ start, run length], ...]).
    pub fn run_lengths(&self) -> Vec<(usize, Vec<[usize; 2]>)> {
        self.rows()
            .into_iter()
            .map(|(t, gs)| {
                let mut runs: Vec<[usize; 2]> = Vec::new();
                for g in gs {
                    match runs.last_mut() {
                        Some(r) if r[0] + r[1] == g => r[1] += 1,
                        _ => runs.push([g, 1]),
                    }
                }
                (t, runs)
            })
            .collect()
    }

    pub fn from_run_lengths(grid: GridSpec, rle: &[(usize, Vec<[usize; 2]>)]) -> Self {
        let cells = rle.iter().flat_map(|(t, runs)| {
            runs.iter().flat_map(move |r| (0..r[1]).map(move |i| (*t as i64, (r[0] + i) as i64)))
        });
        Self::from_cells(grid, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(1.0 / 8.0, 8, 1, 8).unwrap()
    }

    #[test]
    fn rectangle_area_and_box() {
        let s = SupportRegion::rect(grid(), 0.0, 1.0, -0.5, 0.5);
        assert_eq!(s.len(), 9 * 9);
        assert!((s.area - 81.0 / 64.0).abs() < 1e-12);
        assert_eq!(s.bounding_box, [0.0, 1.0, -0.5, 0.5]);
        assert!(s.contains(0, -4) && !s.contains(-1, 0));
        s.check_area().unwrap_err();
    }

    #[test]
    fn neighborhood_and_reflection() {
        let g = grid();
        let s = SupportRegion::rect(g, 0.0, 0.25, 0.0, 0.0);
        let n = s.neighborhood(0.125, 0.125);
        assert_eq!(n.len(), 5 * 3);
        assert!(s.is_subset_of(&n));
        let r = s.reflected();
        assert!(r.contains(-2, 0) && !r.contains(2, 0));
        assert_eq!(SupportRegion::from_run_lengths(g, &n.run_lengths()), n);
    }
}
