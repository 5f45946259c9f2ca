use super::scheme::SamplingScheme;
use crate::error::{Error, Result};
use crate::tfcore::{GridSpec, SampledSignal, C64};
use crate::windows::Mollifier;
use serde::{Deserialize, Serialize};

/// A realized identifier: weighted deltas (or mollified bumps) at nT − t₀.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentifierSpec {
    pub scheme: SamplingScheme,
    /// None means the whole circle.
    pub truncation: Option<(f64, f64)>,
    pub mollifier_delta: Option<f64>,
    /// (sample offset of the delta, period index n) for each kept delta
    pub positions: Vec<(i64, i64)>,
    pub signal: SampledSignal,
    pub empty: bool,
}

/// Builds the identifier on `grid`. Deltas sit at t = nT − t₀ with weight
/// c_{n mod L}; `interval` keeps only those with t in [lo, hi].
pub fn realize_identifier(
    scheme: &SamplingScheme,
    grid: GridSpec,
    interval: Option<(f64, f64)>,
    mollifier: Option<&Mollifier>,
) -> Result<IdentifierSpec> {
    if !scheme.has_weights() {
        return Err(Error::InvalidParameter("scheme has no weights".into()));
    }
    scheme.check_grid(&grid)?;
    if let Some(m) = mollifier {
        m.phi.grid.check_same(&grid, "mollifier")?;
    }
    if let Some((lo, hi)) = interval {
        grid.steps("truncation start", lo)?;
        grid.steps("truncation end", hi)?;
    }
    let mt = grid.steps("T", scheme.t_period)?;
    let t0 = grid.steps("origin t", scheme.origin_t)?;
    let n = grid.n() as i64;
    let count = n / mt;
    let mut positions = Vec::new();
    for k in -count / 2..count - count / 2 {
        let p = k * mt - t0;
        let x = p as f64 * grid.dt;
        let keep = match interval {
            None => true,
            Some((lo, hi)) => x >= lo - 1e-9 * grid.dt && x <= hi + 1e-9 * grid.dt,
        };
        if keep {
            positions.push((p, k));
        }
    }
    let mut values = vec![C64::new(0.0, 0.0); n as usize];
    match mollifier {
        None => {
            for &(p, k) in &positions {
                values[grid.wrap(p)] += scheme.c_coeff(k) / grid.dt;
            }
        }
        Some(m) => {
            let phi = m.phi.normalized();
            let taps: Vec<(i64, C64)> = phi
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.norm() > 0.0)
                .map(|(i, v)| (grid.centered(i), *v))
                .collect();
            for &(p, k) in &positions {
                let c = scheme.c_coeff(k);
                for &(i, v) in &taps {
                    values[grid.wrap(p + i)] += c * v;
                }
            }
        }
    }
    let signal = SampledSignal::new(grid, 0, values)?;
    Ok(IdentifierSpec {
        scheme: scheme.clone(),
        truncation: interval,
        mollifier_delta: mollifier.map(|m| m.delta),
        empty: positions.is_empty(),
        positions,
        signal,
    })
}
