use super::operator::Operator;
use crate::error::Result;
use crate::tfcore::{SampledSignal, C64};
use crate::error::Error;
use crate::windows::frame::random_probe;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    /// number of symbol grid points in the region
    pub points: usize,
    pub empty: bool,
}

/// max |σ(x, ξ)| over grid points with `region(x, ξ)` true (centered coordinates).
pub fn sup_norm_on(op: &dyn Operator, region: &dyn Fn(f64, f64) -> bool) -> Result<SupNorm> {
    let g = op.grid();
    let d = g.dual();
    let mut value: f64 = 0.0;
    let mut points = 0;
    op.for_each_symbol_row(&mut |x, row| {
        let xc = g.coord(x);
        for (k, v) in row.iter().enumerate() {
            if region(xc, d.coord(k)) {
                points += 1;
                value = value.max(v.norm());
            }
        }
    })?;
    Ok(SupNorm { value, points, empty: points == 0 })
}

/// Relative stagnation of the power iteration for operator norms.
pub const NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
}

const MAX_KRYLOV: usize = 400;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Largest eigenvalue of a Hermitian positive semidefinite map: Krylov
/// iteration from a power-iteration start, with full reorthogonalization,
/// stopped at relative stagnation `tol` of the top Ritz value.
pub fn lanczos_max(
    start: Vec<C64>,
    tol: f64,
    mut apply: impl FnMut(&[C64]) -> Result<Vec<C64>>,
) -> Result<(f64, usize)> {
    let nrm = dot(&start, &start).re.sqrt();
    if nrm == 0.0 {
        return Err(Error::Degenerate("zero start vector".into()));
    }
    let mut basis: Vec<Vec<C64>> = vec![start.iter().map(|v| v / nrm).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut prev = f64::NAN;
    for it in 1..=MAX_KRYLOV.min(start.len()) {
        let q = basis.last().unwrap();
        let mut w = apply(q)?;
        let a = dot(&w, q).re;
        alpha.push(a);
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let top = SymmetricEigen::new(t).eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let bnorm = dot(&w, &w).re.sqrt();
        if (top - prev).abs() <= tol * top.abs() || bnorm <= 1e-14 * top.abs().max(f64::MIN_POSITIVE) {
            return Ok((top, it));
        }
        prev = top;
        beta.push(bnorm);
        basis.push(w.iter().map(|v| v / bnorm).collect());
    }
    Ok((prev, MAX_KRYLOV))
}

/// Largest singular value: top eigenvalue of H*H.
pub fn operator_norm_estimate(op: &dyn Operator, seed: u64) -> Result<NormEstimate> {
    let g = op.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_probe(g, &mut rng);
    let (lambda, iterations) = lanczos_max(start, NORM_TOL * 1e-4, |v: &[C64]| {
        let f = SampledSignal::new(g, 0, v.to_vec())?;
        Ok(op.apply_adjoint(&op.apply(&f)?)?.values)
    })?;
    Ok(NormEstimate { value: lambda.max(0.0).sqrt(), iterations })
}
