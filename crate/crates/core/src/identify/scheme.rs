use crate::error::{Error, Result};
use crate::tfcore::{cis, GridSpec, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Identification geometry and weights.
///
/// Cell j is R + (k_j T, n_j Ω) with R = [0, T) × [−Ω/2, Ω/2), in coordinates
/// translated by (origin_t, origin_gamma). Column j of the system matrix is
/// A_{pj} = e^{2πi n_j (p − k_j)/L} c_{(p − k_j) mod L}, and b = A⁻¹ is
/// extended L-periodically in its second index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingScheme {
    pub l: usize,
    pub t_period: f64,
    pub omega: f64,
    pub delta_t: f64,
    pub delta_nu: f64,
    pub origin_t: f64,
    pub origin_gamma: f64,
    pub shifts: Vec<(i64, i64)>,
    /// Empty until weights are chosen.
    pub c: Vec<C64>,
    /// A, row-major L × L.
    pub a: Vec<C64>,
    /// b_{jq}, row-major L × L.
    pub b: Vec<C64>,
    pub condition_number: f64,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl SamplingScheme {
    /// Geometry only; weights are filled by [`super::make_weights`].
    pub fn geometry(
        l: usize,
        t_period: f64,
        delta_t: f64,
        delta_nu: f64,
        origin: (f64, f64),
        shifts: Vec<(i64, i64)>,
    ) -> Result<Self> {
        if l != 1 && !is_prime(l) {
            return Err(Error::InvalidParameter(format!("L = {l} must be 1 or prime")));
        }
        if !(t_period > 0.0) {
            return Err(Error::InvalidParameter("T must be positive".into()));
        }
        if shifts.len() != l {
            return Err(Error::InvalidParameter(format!("{} shifts for L = {l}", shifts.len())));
        }
        let omega = 1.0 / (l as f64 * t_period);
        if !(delta_t >= 0.0 && delta_t < t_period / 2.0 && delta_nu >= 0.0 && delta_nu < omega / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "paddings must satisfy δ_t < T/2 and δ_ν < Ω/2 (got {delta_t}, {delta_nu})"
            )));
        }
        let li = l as i64;
        let mut res: Vec<(i64, i64)> = shifts.iter().map(|&(k, n)| (k.rem_euclid(li), n.rem_euclid(li))).collect();
        res.sort_unstable();
        res.dedup();
        if res.len() != l {
            return Err(Error::InvalidParameter("shifts must have distinct residues mod L".into()));
        }
        Ok(Self {
            l,
            t_period,
            omega,
            delta_t,
            delta_nu,
            origin_t: origin.0,
            origin_gamma: origin.1,
            shifts,
            c: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            condition_number: f64::NAN,
        })
    }

    pub fn has_weights(&self) -> bool {
        self.c.len() == self.l && self.b.len() == self.l * self.l
    }

    /// b_{j,q} with q taken mod L.
    pub fn b_coeff(&self, j: usize, q: i64) -> C64 {
        self.b[j * self.l + q.rem_euclid(self.l as i64) as usize]
    }

    /// Weight of the delta at nT (before the origin shift).
    pub fn c_coeff(&self, n: i64) -> C64 {
        self.c[n.rem_euclid(self.l as i64) as usize]
    }

    /// System matrix for weights `c` and this scheme's shifts.
    pub fn system_matrix(&self, c: &[C64]) -> Vec<C64> {
        let l = self.l as i64;
        let mut a = vec![C64::new(0.0, 0.0); self.l * self.l];
        for p in 0..l {
            for (j, &(k, n)) in self.shifts.iter().enumerate() {
                let s = (p - k).rem_euclid(l);
                let ph = (n.rem_euclid(l) * s).rem_euclid(l) as f64 / l as f64;
                a[p as usize * self.l + j] = cis(TAU * ph) * c[s as usize];
            }
        }
        a
    }

    /// Grid on the same circle whose period structure matches this scheme.
    pub fn grid_for(&self, dt: f64, periods: usize) -> Result<GridSpec> {
        GridSpec::for_period(self.t_period, dt, self.l, periods)
    }

    /// Checks that T, LT, the paddings and the origin are grid-aligned.
    pub fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        let nt = grid.steps("T", self.t_period)?;
        let lt = nt as usize * self.l;
        if grid.n() % lt != 0 {
            return Err(Error::InvalidParameter("LT does not divide the ambient period".into()));
        }
        let d = grid.dual();
        grid.steps("δ_t", self.delta_t)?;
        d.steps("δ_ν", self.delta_nu)?;
        d.steps("Ω", self.omega)?;
        grid.steps("origin t", self.origin_t)?;
        d.steps("origin γ", self.origin_gamma)?;
        Ok(())
    }

    /// Whether every cell lies in [−(L−1)T/2, (L+1)T/2] × [−LΩ/2, LΩ/2].
    pub fn cells_fit_window(&self) -> bool {
        let l = self.l as f64;
        self.shifts.iter().all(|&(k, n)| {
            let (k, n) = (k as f64, n as f64);
            k >= -(l - 1.0) / 2.0 && k + 1.0 <= (l + 1.0) / 2.0 && n - 0.5 >= -l / 2.0 && n + 0.5 <= l / 2.0
        })
    }

    /// Which cell, if any, contains the (untranslated) point (t, γ).
    pub fn cell_of(&self, t: f64, g: f64) -> Option<usize> {
        let k = ((t - self.origin_t) / self.t_period).floor() as i64;
        let n = ((g - self.origin_gamma) / self.omega + 0.5).floor() as i64;
        self.shifts.iter().position(|&s| s == (k, n))
    }

    /// A·b − I in max norm.
    pub fn inverse_residual(&self) -> f64 {
        let l = self.l;
        let mut worst: f64 = 0.0;
        for p in 0..l {
            for q in 0..l {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..l {
                    acc += self.a[p * l + j] * self.b[j * l + q];
                }
                let target = if p == q { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}
