use super::frame::GaborFrameSpec;
use crate::error::{Error, Result};
use crate::tfcore::SampledSignal;
use serde::{Deserialize, Serialize};

/// Boolean mask over a periodic lattice aℤ/(n_k a) × bℤ/(n_l b). Index k
/// sits at the centered coordinate of k (same for ℓ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeMask {
    pub a: f64,
    pub b: f64,
    pub n_k: usize,
    pub n_l: usize,
    pub mask: Vec<bool>,
}

fn centered(i: usize, n: usize) -> i64 {
    let i = i as i64;
    let n = n as i64;
    if i >= (n + 1) / 2 {
        i - n
    } else {
        i
    }
}

impl LatticeMask {
    pub fn empty(a: f64, b: f64, n_k: usize, n_l: usize) -> Self {
        Self { a, b, n_k, n_l, mask: vec![false; n_k * n_l] }
    }

    pub fn full(a: f64, b: f64, n_k: usize, n_l: usize) -> Self {
        Self { a, b, n_k, n_l, mask: vec![true; n_k * n_l] }
    }

    pub fn from_fn(a: f64, b: f64, n_k: usize, n_l: usize, pred: impl Fn(f64, f64) -> bool) -> Self {
        let mut m = Self::empty(a, b, n_k, n_l);
        for k in 0..n_k {
            for l in 0..n_l {
                let (x, xi) = m.coords(k, l);
                m.mask[k * n_l + l] = pred(x, xi);
            }
        }
        m
    }

    /// Mask over the lattice of a Gabor system.
    pub fn for_frame(spec: &GaborFrameSpec, pred: impl Fn(f64, f64) -> bool) -> Result<Self> {
        let (_, n_k, n_l) = spec.lattice()?;
        Ok(Self::from_fn(spec.a, spec.b, n_k, n_l, pred))
    }

    pub fn coords(&self, k: usize, l: usize) -> (f64, f64) {
        (centered(k, self.n_k) as f64 * self.a, centered(l, self.n_l) as f64 * self.b)
    }

    pub fn contains(&self, k: usize, l: usize) -> bool {
        self.mask[k * self.n_l + l]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_subset_of(&self, other: &LatticeMask) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// Points whose Euclidean distance (periodic, physical units) to every
    /// point of the complement exceeds `d`.
    pub fn erode(&self, d: f64) -> LatticeMask {
        let mut out = self.clone();
        if d <= 0.0 {
            return out;
        }
        let rk = ((d / self.a).floor() as i64).min(self.n_k as i64);
        let rl = ((d / self.b).floor() as i64).min(self.n_l as i64);
        let (nk, nl) = (self.n_k as i64, self.n_l as i64);
        for k in 0..nk {
            for l in 0..nl {
                if !self.mask[(k * nl + l) as usize] {
                    continue;
                }
                'scan: for dk in -rk..=rk {
                    for dl in -rl..=rl {
                        let x = dk as f64 * self.a;
                        let y = dl as f64 * self.b;
                        if x * x + y * y > d * d {
                            continue;
                        }
                        let kk = (k + dk).rem_euclid(nk);
                        let ll = (l + dl).rem_euclid(nl);
                        if !self.mask[(kk * nl + ll) as usize] {
                            out.mask[(k * nl + l) as usize] = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Fraction of the Gabor coefficient energy of `f` that lies on `s`. The
/// frame should be tight with bound 1 (see [`GaborFrameSpec::normalized_tight`]).
pub fn localization_measure(f: &SampledSignal, spec: &GaborFrameSpec, s: &LatticeMask) -> Result<f64> {
    if f.max_abs() == 0.0 {
        return Err(Error::Degenerate("localization of the zero signal is undefined".into()));
    }
    let c = spec.analysis(f)?;
    if c.n_k != s.n_k || c.n_l != s.n_l {
        return Err(Error::GridMismatch("mask does not match the frame lattice".into()));
    }
    let total = c.energy();
    let inside: f64 = c.values.iter().zip(&s.mask).filter(|(_, &m)| m).map(|(v, _)| v.norm_sqr()).sum();
    Ok(inside / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfcore::{GridSpec, C64};
    use crate::windows::bump::quadratic_window;

    fn square(lo: f64, hi: f64) -> LatticeMask {
        LatticeMask::from_fn(1.0, 1.0, 40, 40, |x, y| (lo..=hi).contains(&x) && (lo..=hi).contains(&y))
    }

    #[test]
    fn erosion_of_rectangle() {
        assert_eq!(square(0.0, 10.0).erode(2.0), square(2.0, 8.0));
        assert_eq!(square(0.0, 10.0).erode(0.0), square(0.0, 10.0));
        let full = LatticeMask::full(0.5, 0.25, 8, 8);
        assert_eq!(full.erode(3.0), full);
    }

    #[test]
    fn localization_of_shifted_window() {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 32).unwrap();
        let w = SampledSignal::from_real_fn(g, |t| quadratic_window(t, 0.0, 0.5, 0.125));
        let spec = GaborFrameSpec::new(w.clone(), 0.5, 1.0, 1.0).unwrap().normalized_tight(1).unwrap();
        let f = w.shifted(32).modulated(64);
        let near = LatticeMask::for_frame(&spec, |x, y| (x - 2.0).abs() <= 2.5 && (y - 2.0).abs() <= 5.0).unwrap();
        let rho = localization_measure(&f, &spec, &near).unwrap();
        assert!(rho >= 0.99, "{rho}");
        let all = LatticeMask::for_frame(&spec, |_, _| true).unwrap();
        assert!((localization_measure(&f, &spec, &all).unwrap() - 1.0).abs() < 1e-15);
        let none = LatticeMask::for_frame(&spec, |_, _| false).unwrap();
        assert_eq!(localization_measure(&f, &spec, &none).unwrap(), 0.0);
        let rot = f.scaled(C64::new(0.6, 0.8));
        assert!((localization_measure(&rot, &spec, &near).unwrap() - rho).abs() < 1e-12);
    }
}
