use super::{check_windows, demodulate, Geometry};
use crate::error::{Error, Result};
use crate::identify::SamplingScheme;
use crate::operators::{BandlimitedOperator, SupportRegion};
use crate::tfcore::{zak_transform, zak_value, Axis, PlaneArray, SampledSignal, Semantics, C64};
use crate::windows::{support_of, PouKind, WindowPair};

/// X_j(t, ν) = e^{−2πiνk_jT} r(t) φ̂(ν) 𝛈(t + k_jT, ν + n_jΩ) for the
/// translated operator, on the supports of r and φ̂.
#[derive(Debug, Clone)]
pub struct ZakSlices {
    pub scheme: SamplingScheme,
    pub kind: PouKind,
    pub slices: Vec<PlaneArray>,
}

fn span_of(s: &SampledSignal) -> Result<Axis> {
    let (lo, hi) = support_of(s);
    if !lo.is_finite() {
        return Err(Error::Degenerate("window is identically zero".into()));
    }
    let a = s.grid.steps("support", lo)?;
    let b = s.grid.steps("support", hi)?;
    Ok(Axis::span(s.grid, a, (b - a + 1) as usize))
}

/// Solves the L × L system r φ̂ Z(Hw)(t + pT, ν) = Ω e^{2πiνpT} Σ_j A_{pj} X_j
/// pointwise with b = A⁻¹.
pub fn zak_system_solve(response: &SampledSignal, scheme: &SamplingScheme, windows: &WindowPair) -> Result<ZakSlices> {
    let grid = response.grid;
    check_windows(scheme, windows, &grid)?;
    if !scheme.has_weights() {
        return Err(Error::InvalidParameter("scheme has no weights".into()));
    }
    let geo = Geometry::new(scheme, &grid)?;
    let resp = SampledSignal::new(grid, 0, demodulate(response, &geo))?;
    let z = zak_transform(&resp, scheme.l, scheme.t_period)?;
    let ta = span_of(&windows.r)?;
    let va = span_of(&windows.phi_hat)?;
    let r = windows.r.normalized();
    let ph = windows.phi_hat.normalized();
    let lt = scheme.l as f64 * scheme.t_period;
    let mut slices = Vec::with_capacity(scheme.l);
    for j in 0..scheme.l {
        let mut p = PlaneArray::zeros(ta, va, Semantics::TimeFreq)?;
        for a in 0..ta.len {
            let t = ta.raw(a);
            let rv = r.values[grid.wrap(t)];
            for c in 0..va.len {
                let nu = va.raw(c);
                let w = rv * ph.values[grid.wrap(nu)];
                if w.norm() == 0.0 {
                    continue;
                }
                let mut acc = C64::new(0.0, 0.0);
                for q in 0..scheme.l as i64 {
                    let zv = zak_value(&z, t + q * geo.nt, nu);
                    acc += scheme.b_coeff(j, q) * geo.root(-nu * q * geo.nt) * zv;
                }
                *p.get_mut(a, c) = acc * w * lt;
            }
        }
        slices.push(p);
    }
    Ok(ZakSlices { scheme: scheme.clone(), kind: windows.kind, slices })
}

/// η on `support` from the slices: Σ_j e^{2πiνk_jT} X_j (linear windows)
/// or Σ_j e^{2πiνk_jT} r φ̂ X_j (quadratic windows), undone chirp and
/// origin translation.
pub fn reassemble_spreading(
    slices: &ZakSlices,
    windows: &WindowPair,
    support: &SupportRegion,
) -> Result<BandlimitedOperator> {
    let grid = support.grid;
    let geo = Geometry::new(&slices.scheme, &grid)?;
    let r = windows.r.normalized();
    let ph = windows.phi_hat.normalized();
    let dual = grid.dual();
    let mut eta = Vec::with_capacity(support.len());
    for &(ti, gi) in &support.cells {
        let tp = grid.centered(ti) - geo.t0;
        let gp = dual.centered(gi) - geo.g0;
        let mut bold = C64::new(0.0, 0.0);
        for (j, &(kj, nj)) in slices.scheme.shifts.iter().enumerate() {
            let t = tp - kj * geo.nt;
            let nu = gp - nj * geo.k_om;
            let x = &slices.slices[j];
            let (Some(a), Some(c)) = (x.x.position(t), x.y.position(nu)) else { continue };
            if t < x.x.first || t >= x.x.first + x.x.len as i64 || nu < x.y.first || nu >= x.y.first + x.y.len as i64 {
                continue;
            }
            let mut v = x.get(a, c) * geo.root(nu * kj * geo.nt);
            if slices.kind == PouKind::Quadratic {
                v *= r.values[grid.wrap(t)] * ph.values[grid.wrap(nu)];
            }
            bold += v;
        }
        eta.push(bold * geo.root(-gp * tp));
    }
    BandlimitedOperator::new(support.clone(), eta)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::identify::realize_identifier;
    use crate::operators::{random_opw, Operator, Rect};
    use crate::windows::build_pou_pair_split;

    fn windows(kind: PouKind) -> WindowPair {
        build_pou_pair_split(kind, 1.0, 1.0 / 3.0, 0.125, 1.0 / 24.0, grid(16)).unwrap()
    }

    #[test]
    fn reassembly_recovers_eta() {
        for kind in [PouKind::Linear, PouKind::Quadratic] {
            let s = three_cell_scheme((0.25, 1.0 / 24.0));
            let g = grid(16);
            let op = in_space_operator(&s, g, 5);
            let w = realize_identifier(&s, g, None, None).unwrap();
            let win = windows(kind);
            let sl = zak_system_solve(&op.apply(&w.signal).unwrap(), &s, &win).unwrap();
            let back = reassemble_spreading(&sl, &win, &op.support).unwrap();
            let err = back.eta.iter().zip(&op.eta).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let scale = op.eta.iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(err < 1e-10 * scale, "{kind:?}: {err}");
        }
    }

    #[test]
    fn single_cell_operator_is_isolated() {
        let s = three_cell_scheme((0.0, 0.0));
        let g = grid(16);
        let m = SupportRegion::from_rects(g, &[Rect::new(1.2, 1.8, -1.0 / 3.0 - 0.08, -1.0 / 3.0 + 0.08)]);
        let op = random_opw(&m, 3, 2).unwrap();
        let w = realize_identifier(&s, g, None, None).unwrap();
        let sl = zak_system_solve(&op.apply(&w.signal).unwrap(), &s, &windows(PouKind::Linear)).unwrap();
        let j0 = s.shifts.iter().position(|&c| c == (1, -1)).unwrap();
        let norm = op.eta.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (j, x) in sl.slices.iter().enumerate() {
            if j != j0 {
                assert!(x.max_abs() <= 1e-8 * norm, "slice {j}: {}", x.max_abs());
            } else {
                assert!(x.max_abs() > 0.1 * norm);
            }
        }
    }

    #[test]
    fn zero_response_gives_zero_slices() {
        let s = three_cell_scheme((0.0, 0.0));
        let sl = zak_system_solve(&SampledSignal::zeros(grid(16)), &s, &windows(PouKind::Linear)).unwrap();
        assert!(sl.slices.iter().all(|x| x.max_abs() == 0.0));
    }
}
