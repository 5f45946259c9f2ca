use super::scheme::SamplingScheme;
use crate::error::{Error, Result};
use crate::tfcore::{cis, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Acceptance threshold on cond(A).
pub const MAX_CONDITION: f64 = 1e8;
const MAX_DRAWS: usize = 20;

/// L × L² matrix whose column (k, ℓ) (lexicographic) is T^k M^ℓ c, with
/// (T^k M^ℓ c)_p = e^{2πiℓ(p+k)/L} c_{p+k}.
pub fn gabor_system_matrix(c: &[C64]) -> DMatrix<C64> {
    let l = c.len();
    DMatrix::from_fn(l, l * l, |p, col| {
        let (k, m) = (col / l, col % l);
        let s = (p + k) % l;
        cis(TAU * ((m * s) % l) as f64 / l as f64) * c[s]
    })
}

pub fn cubic_phase(l: usize) -> Vec<C64> {
    (0..l).map(|n| cis(TAU * ((n * n * n) % l) as f64 / l as f64)).collect()
}

/// Condition number of a square complex matrix (∞ if singular).
pub fn condition_number(a: &DMatrix<C64>) -> f64 {
    let s = a.clone().svd(false, false).singular_values;
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Fills c, A, b for explicit weights; rejects ill-conditioned choices.
pub fn with_weights(scheme: &SamplingScheme, c: Vec<C64>) -> Result<SamplingScheme> {
    let l = scheme.l;
    if c.len() != l {
        return Err(Error::InvalidParameter(format!("{} weights for L = {l}", c.len())));
    }
    let a = scheme.system_matrix(&c);
    let am = DMatrix::from_row_slice(l, l, &a);
    let cond = condition_number(&am);
    if !(cond < MAX_CONDITION) {
        return Err(Error::WeightsRejected { draws: 1, best_cond: cond });
    }
    let inv = am.try_inverse().ok_or_else(|| Error::Degenerate("system matrix is singular".into()))?;
    let mut b = vec![C64::new(0.0, 0.0); l * l];
    for j in 0..l {
        for q in 0..l {
            b[j * l + q] = inv[(j, q)];
        }
    }
    Ok(SamplingScheme { c, a, b, condition_number: cond, ..scheme.clone() })
}

/// c ≡ 1 for L = 1; cubic phase first for L ≥ 5; otherwise (and as
/// fallback) unimodular random draws.
pub fn make_weights(scheme: &SamplingScheme, seed: u64) -> Result<SamplingScheme> {
    let l = scheme.l;
    if l == 1 {
        return with_weights(scheme, vec![C64::new(1.0, 0.0)]);
    }
    let mut best = f64::INFINITY;
    if l >= 5 {
        match with_weights(scheme, cubic_phase(l)) {
            Ok(s) => return Ok(s),
            Err(Error::WeightsRejected { best_cond, .. }) => best = best.min(best_cond),
            Err(e) => return Err(e),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let c: Vec<C64> = (0..l).map(|_| cis(TAU * rng.gen::<f64>())).collect();
        match with_weights(scheme, c) {
            Ok(s) => return Ok(s),
            Err(Error::WeightsRejected { best_cond, .. }) => best = best.min(best_cond),
            Err(e) => return Err(e),
        }
    }
    Err(Error::WeightsRejected { draws: MAX_DRAWS, best_cond: best })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparkCertificate {
    pub l: usize,
    pub submatrices: usize,
    /// submatrices with |det| at or below the threshold
    pub singular: usize,
    pub min_abs_det: f64,
    pub threshold: f64,
    pub full_spark: bool,
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive check of all L × L submatrices of the Gabor system matrix.
pub fn full_spark_certificate(c: &[C64], threshold: f64) -> SparkCertificate {
    let l = c.len();
    let g = gabor_system_matrix(c);
    let mut idx: Vec<usize> = (0..l).collect();
    let mut count = 0;
    let mut singular = 0;
    let mut min_abs_det = f64::INFINITY;
    loop {
        let sub = DMatrix::from_fn(l, l, |p, j| g[(p, idx[j])]);
        let d = sub.determinant().norm();
        count += 1;
        if d <= threshold {
            singular += 1;
        }
        min_abs_det = min_abs_det.min(d);
        if !next_combination(&mut idx, l * l) {
            break;
        }
    }
    SparkCertificate { l, submatrices: count, singular, min_abs_det, threshold, full_spark: singular == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gabor_matrix_examples() {
        let g = gabor_system_matrix(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let expect = [[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]];
        for p in 0..2 {
            for q in 0..4 {
                assert!((g[(p, q)] - c(expect[p][q], 0.0)).norm() < 1e-15);
            }
        }
        let g = gabor_system_matrix(&[c(1.0, 0.0), c(0.0, 1.0)]);
        assert!((g[(0, 2)] - c(0.0, 1.0)).norm() < 1e-15 && (g[(1, 2)] - c(1.0, 0.0)).norm() < 1e-15);
        let sub = DMatrix::from_fn(2, 2, |p, j| g[(p, [0, 2][j])]);
        assert!((sub.determinant() - c(2.0, 0.0)).norm() < 1e-14);
        let z = gabor_system_matrix(&[c(0.0, 0.0); 3]);
        assert!(z.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn weights_for_two_cells() {
        // shifts (0,0), (1,1): with c = (1, i) the two columns are (1, i) and
        // (−i, 1), which are parallel
        let s = SamplingScheme::geometry(2, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0), (1, 1)]).unwrap();
        assert!(with_weights(&s, vec![c(1.0, 0.0), c(0.0, 1.0)]).is_err());
        let w = make_weights(&s, 7).unwrap();
        assert!(w.condition_number < MAX_CONDITION);
        assert!(w.inverse_residual() < 1e-12);
        // shifts (0,0), (1,0) with c = (1, i): [c, Tc] has |det| = 2
        let s2 = SamplingScheme::geometry(2, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0), (1, 0)]).unwrap();
        let w2 = with_weights(&s2, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let det = DMatrix::from_row_slice(2, 2, &w2.a).determinant();
        assert!((det.norm() - 2.0).abs() < 1e-14);
        assert!(w2.inverse_residual() < 1e-14);
    }

    #[test]
    fn single_cell_fast_path() {
        let s = SamplingScheme::geometry(1, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0)]).unwrap();
        let w = make_weights(&s, 0).unwrap();
        assert_eq!(w.c, vec![c(1.0, 0.0)]);
        assert_eq!(w.b, vec![c(1.0, 0.0)]);
        assert_eq!(w.a, vec![c(1.0, 0.0)]);
    }

    #[test]
    fn combinations_are_enumerated() {
        let c3 = cubic_phase(3);
        assert_eq!(full_spark_certificate(&c3, 1e-8).submatrices, 84);
    }

    #[test]
    fn random_weights_at_three_are_full_spark() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c: Vec<C64> = (0..3).map(|_| cis(TAU * rng.gen::<f64>())).collect();
        let cert = full_spark_certificate(&c, 1e-8);
        assert!(cert.full_spark, "{cert:?}");
    }
}
