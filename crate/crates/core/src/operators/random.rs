use super::operator::BandlimitedOperator;
use super::support::SupportRegion;
use crate::error::Result;
use crate::tfcore::C64;
use crate::windows::bump;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Default smoothing half-width in grid cells.
pub const DEFAULT_SMOOTHING: usize = 4;

/// Complex white noise on the support, smoothed by a separable bump of
/// half-width `smoothing` cells, restricted to the support again and scaled
/// to unit L2 norm. Deterministic in `seed`.
pub fn random_opw(support: &SupportRegion, seed: u64, smoothing: usize) -> Result<BandlimitedOperator> {
    support.check_area()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<C64> = support
        .cells
        .iter()
        .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let eta = if smoothing == 0 {
        noise
    } else {
        let s = smoothing as i64;
        let w: Vec<f64> = (-s..=s).map(|i| bump(i as f64 / (s + 1) as f64)).collect();
        let g = support.grid;
        support
            .cells
            .iter()
            .map(|&(t, k)| {
                let mut acc = C64::new(0.0, 0.0);
                for (a, wa) in (-s..=s).zip(&w) {
                    for (b, wb) in (-s..=s).zip(&w) {
                        if let Some(p) = support.position(g.wrap(t as i64 + a), g.wrap(k as i64 + b)) {
                            acc += noise[p] * wa * wb;
                        }
                    }
                }
                acc
            })
            .collect()
    };
    let op = BandlimitedOperator::new(support.clone(), eta)?;
    let nrm = op.eta_norm();
    Ok(if nrm > 0.0 { op.scaled(C64::new(1.0 / nrm, 0.0)) } else { op })
}
