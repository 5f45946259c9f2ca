use super::{check_windows, demodulate, taps, Geometry};
use crate::error::{Error, Result};
use crate::identify::SamplingScheme;
use crate::operators::KernelOperator;
use crate::tfcore::{fft, inverse_ft, GridSpec, SampledSignal, C64};
use crate::windows::{LowPass, PouKind, WindowPair};
use std::collections::BTreeMap;

/// Low-pass kernel with φ̂ = T·φ̂_window, used by the single-cell path.
pub fn lowpass_from_window(w: &WindowPair) -> LowPass {
    let phi_hat = w.phi_hat.scaled(C64::new(w.t_period, 0.0));
    LowPass {
        t_period: w.t_period,
        band: w.omega / 2.0 - w.delta_nu,
        cutoff: w.omega / 2.0 + w.delta_nu,
        phi: inverse_ft(&phi_hat),
        phi_hat,
    }
}

struct Assembly<'a> {
    grid: GridSpec,
    nt: i64,
    l: usize,
    shifts: &'a [(i64, i64)],
    b: &'a dyn Fn(usize, i64) -> C64,
    r: &'a SampledSignal,
    phi_hat: &'a SampledSignal,
    scale: f64,
}

// h(x, t) = scale Σ_j r(t − k_jT) e^{2πin_jΩ(x−t)} Σ_q b_{jq} Hw(s_q) φ(x − s_q),
// s_q = t − (k_j − q)T. Each column is built in the frequency domain: the
// q-sum is a length-LK DFT, φ̂ restricts it to a band, and the modulation
// shifts the band by n_j K bins.
fn assemble(a: &Assembly, resp: &[C64]) -> Vec<(usize, Vec<C64>)> {
    let g = a.grid;
    let n = g.n();
    let ni = n as i64;
    let lk = n / a.nt as usize;
    let k_om = ni / (a.l as i64 * a.nt);
    let r_taps = taps(a.r);
    let bins: Vec<(i64, C64)> = taps(a.phi_hat).into_iter().map(|(k, v)| (k, v / g.dt)).collect();
    let roots = crate::tfcore::unit_roots(n);
    let root = |e: i64| roots[e.rem_euclid(ni) as usize];
    let mut columns: BTreeMap<usize, Vec<C64>> = BTreeMap::new();
    let mut beta = vec![C64::new(0.0, 0.0); lk];
    for (j, &(kj, nj)) in a.shifts.iter().enumerate() {
        for &(u, rv) in &r_taps {
            let i = u + kj * a.nt;
            for (q, bq) in beta.iter_mut().enumerate() {
                let s = i - (kj - q as i64) * a.nt;
                *bq = (a.b)(j, q as i64) * resp[g.wrap(s)];
            }
            fft::forward(&mut beta);
            let col = columns.entry(g.wrap(i)).or_insert_with(|| vec![C64::new(0.0, 0.0); n]);
            let w = rv * a.scale * root(-nj * k_om * i);
            let base = i - kj * a.nt;
            for &(k, ph) in &bins {
                let d = beta[k.rem_euclid(lk as i64) as usize];
                col[g.wrap(k + nj * k_om)] += w * ph * d * root(-k * base);
            }
        }
    }
    columns
        .into_iter()
        .map(|(i, mut c)| {
            fft::inverse(&mut c);
            c.iter_mut().for_each(|v| *v /= n as f64);
            (i, c)
        })
        .collect()
}

fn rect_rows(resp: &[C64], grid: GridSpec, nt: i64, lowpass: &LowPass) -> Result<Vec<(usize, Vec<C64>)>> {
    lowpass.phi_hat.grid.check_same(&grid.dual(), "low-pass")?;
    let mut chi = SampledSignal::zeros(grid);
    for i in 0..nt {
        chi.values[grid.wrap(i)] = C64::new(1.0, 0.0);
    }
    let one = |_: usize, _: i64| C64::new(1.0, 0.0);
    let a = Assembly { grid, nt, l: 1, shifts: &[(0, 0)], b: &one, r: &chi, phi_hat: &lowpass.phi_hat, scale: 1.0 };
    Ok(assemble(&a, resp))
}

/// Single-cell recovery: h(x, t) = χ_{[0,T)}(t) Σ_k Hw(t + kT) φ(x − t − kT)
/// with w the unweighted delta train at kT.
pub fn recover_kernel_rect(response: &SampledSignal, t_period: f64, lowpass: &LowPass) -> Result<KernelOperator> {
    let grid = response.grid;
    let nt = grid.steps("T", t_period)?;
    if nt <= 0 || grid.n() % nt as usize != 0 {
        return Err(Error::InvalidParameter("T does not tile the ambient period".into()));
    }
    let resp = response.normalized().values;
    KernelOperator::new(grid, rect_rows(&resp, grid, nt, lowpass)?)
}

// rows of the translated operator back to the original coordinates
fn untranslate(rows: Vec<(usize, Vec<C64>)>, geo: &Geometry, grid: GridSpec) -> Vec<(usize, Vec<C64>)> {
    if geo.t0 == 0 && geo.g0 == 0 {
        return rows;
    }
    let mods: Vec<C64> = (0..geo.n as i64).map(|x| geo.root(geo.g0 * x)).collect();
    rows.into_iter()
        .map(|(i, mut h)| {
            h.iter_mut().zip(&mods).for_each(|(v, m)| *v *= m);
            (grid.wrap(i as i64 + geo.t0), h)
        })
        .collect()
}

/// Kernel of H from the response to the scheme's weighted delta train.
/// A single-cell scheme goes through [`recover_kernel_rect`] with χ_{[0,T)}
/// and the low-pass T·φ̂.
pub fn recover_kernel_general(
    response: &SampledSignal,
    scheme: &SamplingScheme,
    windows: &WindowPair,
) -> Result<KernelOperator> {
    let grid = response.grid;
    if windows.kind != PouKind::Linear {
        return Err(Error::InvalidParameter("kernel recovery needs a linear partition of unity".into()));
    }
    check_windows(scheme, windows, &grid)?;
    if !scheme.has_weights() {
        return Err(Error::InvalidParameter("scheme has no weights".into()));
    }
    let geo = Geometry::new(scheme, &grid)?;
    let resp = demodulate(response, &geo);
    let rows = if scheme.l == 1 {
        rect_rows(&resp, grid, geo.nt, &lowpass_from_window(windows))?
    } else {
        let b = |j: usize, q: i64| scheme.b_coeff(j, q);
        let a = Assembly {
            grid,
            nt: geo.nt,
            l: scheme.l,
            shifts: &scheme.shifts,
            b: &b,
            r: &windows.r,
            phi_hat: &windows.phi_hat,
            scale: scheme.l as f64 * scheme.t_period,
        };
        assemble(&a, &resp)
    };
    KernelOperator::new(grid, untranslate(rows, &geo, grid))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::identify::{make_weights, realize_identifier};
    use crate::operators::{random_opw, BandlimitedOperator, Operator, SupportRegion};
    use crate::windows::{build_lowpass, build_pou_pair_split};

    fn max_rel_kernel(a: &KernelOperator, b: &KernelOperator) -> f64 {
        let pa = a.symbol().unwrap();
        let pb = b.symbol().unwrap();
        pa.rel_linf(&pb).unwrap()
    }

    #[test]
    fn rect_recovery_is_exact_on_the_grid() {
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 8).unwrap();
        let m = SupportRegion::rect(g, 0.0, 0.96875, -0.375, 0.375);
        let op = random_opw(&m, 4, 2).unwrap();
        let s = crate::identify::SamplingScheme::geometry(1, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0)]).unwrap();
        let s = make_weights(&s, 0).unwrap();
        let w = realize_identifier(&s, g, None, None).unwrap();
        let lp = build_lowpass(g, 1.0, 0.4, 0.5).unwrap();
        let rec = recover_kernel_rect(&op.apply(&w.signal).unwrap(), 1.0, &lp).unwrap();
        assert!(max_rel_kernel(&rec, &KernelOperator::from_bandlimited(&op)) < 1e-12);
    }

    #[test]
    fn zero_response_gives_zero_kernel() {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 8).unwrap();
        let lp = build_lowpass(g, 1.0, 0.3, 0.5).unwrap();
        let rec = recover_kernel_rect(&SampledSignal::zeros(g), 1.0, &lp).unwrap();
        assert!(rec.rows.iter().all(|(_, h)| h.iter().all(|v| v.norm() == 0.0)));
    }

    #[test]
    fn multiplication_operator_is_interpolation() {
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 16).unwrap();
        let m = SampledSignal::from_fn(g, |x| {
            C64::new((std::f64::consts::TAU * 0.125 * x).cos(), 0.5 * (std::f64::consts::TAU * 0.25 * x).sin())
        });
        let op = BandlimitedOperator::multiplication(&m);
        let s = crate::identify::SamplingScheme::geometry(1, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0)]).unwrap();
        let w = realize_identifier(&make_weights(&s, 0).unwrap(), g, None, None).unwrap();
        let lp = build_lowpass(g, 1.0, 0.375, 0.5).unwrap();
        let rec = recover_kernel_rect(&op.apply(&w.signal).unwrap(), 1.0, &lp).unwrap();
        // the only nonzero row is t = 0 and it holds m(x)/dt
        let row0 = &rec.rows.iter().find(|r| r.0 == 0).unwrap().1;
        for x in 0..g.n() {
            assert!((row0[x] * g.dt - m.values[x]).norm() < 1e-10);
        }
        let others = rec.rows.iter().filter(|r| r.0 != 0).map(|r| r.1.iter().map(|v| v.norm()).fold(0.0, f64::max));
        assert!(others.fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn general_recovery_three_cells() {
        for origin in [(0.0, 0.0), (0.25, 1.0 / 24.0)] {
            let s = three_cell_scheme(origin);
            let g = grid(16);
            let op = in_space_operator(&s, g, 9);
            let w = realize_identifier(&s, g, None, None).unwrap();
            let win = build_pou_pair_split(PouKind::Linear, 1.0, 1.0 / 3.0, 0.125, 1.0 / 24.0, g).unwrap();
            let rec = recover_kernel_general(&op.apply(&w.signal).unwrap(), &s, &win).unwrap();
            let err = max_rel_kernel(&rec, &KernelOperator::from_bandlimited(&op));
            assert!(err < 1e-11, "{origin:?}: {err}");
        }
    }

    #[test]
    fn single_cell_general_matches_rect_bitwise() {
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 8).unwrap();
        let s = crate::identify::SamplingScheme::geometry(1, 1.0, 0.125, 0.125, (0.0, 0.0), vec![(0, 0)]).unwrap();
        let s = make_weights(&s, 0).unwrap();
        let m = SupportRegion::rect(g, 0.125, 0.875, -0.25, 0.25);
        let op = random_opw(&m, 2, 2).unwrap();
        let resp = op.apply(&realize_identifier(&s, g, None, None).unwrap().signal).unwrap();
        let win = build_pou_pair_split(PouKind::Linear, 1.0, 1.0, 0.125, 0.125, g).unwrap();
        let a = recover_kernel_general(&resp, &s, &win).unwrap();
        let b = recover_kernel_rect(&resp, 1.0, &lowpass_from_window(&win)).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn mismatched_windows_are_rejected() {
        let s = three_cell_scheme((0.0, 0.0));
        let g = grid(16);
        let win = build_pou_pair_split(PouKind::Linear, 1.0, 1.0 / 3.0, 0.0625, 1.0 / 24.0, g).unwrap();
        assert!(recover_kernel_general(&SampledSignal::zeros(g), &s, &win).is_err());
    }
}
