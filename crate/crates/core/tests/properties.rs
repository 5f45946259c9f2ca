use opsamp_core::identify::{
    full_spark_certificate, make_weights, realize_identifier, with_weights, SamplingScheme,
};
use opsamp_core::operators::{random_opw, sup_norm_on, BandlimitedOperator, Operator, Route, SupportRegion};
use opsamp_core::recover::{discrete_coefficients, recover_kernel_general, symbol_from_coefficients};
use opsamp_core::tfcore::{
    cis, forward_ft, inverse_ft, inverse_zak, stft_at, symplectic_ft, zak_transform, Axis, GridSpec, PlaneArray,
    SampledSignal, Semantics, C64,
};
use opsamp_core::windows::{
    build_mollifier, build_pou_pair, build_pou_pair_split, frame_bounds, localization_measure, pou_residual, Band,
    GaborFrameSpec, LatticeMask, PouKind,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn signal(grid: GridSpec, seed: u64) -> SampledSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..grid.n()).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    SampledSignal::new(grid, 0, v).unwrap()
}

fn small_grid() -> impl Strategy<Value = GridSpec> {
    (1usize..=3, 2usize..=8, 1usize..=4).prop_map(|(l, n, k)| GridSpec::new(1.0 / n as f64, n, l, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ft_is_unitary_and_invertible(grid in small_grid(), seed in any::<u64>(), origin in 0usize..64) {
        let mut s = signal(grid, seed);
        s.origin_index = origin % grid.n();
        let f = forward_ft(&s);
        prop_assert!((f.norm_sqr() - s.norm_sqr()).abs() <= 1e-12 * s.norm_sqr());
        let back = inverse_ft(&f);
        prop_assert!(back.rel_err(&s).unwrap() <= 1e-12);
    }

    #[test]
    fn symplectic_ft_is_an_involution(grid in small_grid(), seed in any::<u64>()) {
        let mut p = PlaneArray::full(grid, Semantics::TimeFreq).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        p.values.iter_mut().for_each(|v| *v = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let s = symplectic_ft(&p).unwrap();
        prop_assert!((s.norm() - p.norm()).abs() <= 1e-12 * p.norm());
        prop_assert!(symplectic_ft(&s).unwrap().rel_linf(&p).unwrap() <= 1e-12);
    }

    #[test]
    fn zak_round_trip_and_energy(grid in small_grid(), seed in any::<u64>()) {
        let f = signal(grid, seed);
        let z = zak_transform(&f, grid.l, grid.t_period()).unwrap();
        let e: f64 = z.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dt * grid.dnu() * grid.duration() / grid.periods as f64;
        prop_assert!((e - f.norm_sqr()).abs() <= 1e-12 * e);
        prop_assert!(inverse_zak(&z, grid).unwrap().rel_err(&f).unwrap() <= 1e-12);
    }

    #[test]
    fn stft_covariance(seed in any::<u64>(), a in -20i64..20, m in -20i64..20, xs in -16i64..16, ks in -16i64..16) {
        let g = GridSpec::new(0.25, 4, 1, 8).unwrap();
        let n = g.n() as f64;
        let f = signal(g, seed);
        let w = signal(g, seed ^ 1);
        let lhs = stft_at(&f.shifted(a), &w, xs, ks);
        let rhs = cis(-TAU * (ks * a) as f64 / n) * stft_at(&f, &w, xs - a, ks);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        let lhs = stft_at(&f.modulated(m), &w, xs, ks);
        let rhs = stft_at(&f, &w, xs, ks - m);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn pou_residuals_vanish(nt in (1usize..=4).prop_map(|k| 8 * k), dpos in 1usize..4, quadratic in any::<bool>()) {
        let g = GridSpec::new(1.0 / nt as f64, nt, 1, 8).unwrap();
        // δ a multiple of both dt and dν = 1/8, below T/2
        let delta = dpos as f64 / 8.0;
        prop_assume!(delta < 0.5);
        let kind = if quadratic { PouKind::Quadratic } else { PouKind::Linear };
        let w = build_pou_pair(kind, 1.0, 1.0, delta, g).unwrap();
        let (a, b) = w.residuals().unwrap();
        prop_assert!(a <= 1e-12 && b <= 1e-12);
        prop_assert!(pou_residual(&w.r, 1.0, quadratic).unwrap() <= 1e-12);
    }

    #[test]
    fn quadratic_windows_give_tight_frames(dpos in 1usize..=3, seed in any::<u64>()) {
        // a circle of length 16 β₂ puts b = 1/β₂ on the dual grid
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 16 + 2 * dpos).unwrap();
        let delta = dpos as f64 / 16.0;
        let r = build_pou_pair_split(PouKind::Quadratic, 1.0, 1.0, delta, g.dnu(), g).unwrap().r;
        let beta2 = 1.0 + 2.0 * delta;
        let b = 1.0 / beta2;
        let fb = frame_bounds(&GaborFrameSpec::new(r, 1.0, b, beta2).unwrap(), seed).unwrap();
        prop_assert!((fb.upper - fb.lower) / fb.lower <= 1e-8);
        prop_assert!((fb.lower - beta2).abs() <= 1e-8 * beta2);
    }

    #[test]
    fn localization_invariance_and_monotonicity(seed in any::<u64>(), phase in 0.0f64..1.0, lo in 0.5f64..2.0, grow in 0.0f64..2.0) {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 16).unwrap();
        let r = build_pou_pair_split(PouKind::Quadratic, 1.0, 1.0, 0.25, g.dnu(), g).unwrap().r;
        let spec = GaborFrameSpec::new(r, 0.5, 0.5, 1.0).unwrap().normalized_tight(1).unwrap();
        let f = signal(g, seed);
        let s1 = LatticeMask::for_frame(&spec, |x, y| x.abs() <= lo && y.abs() <= lo).unwrap();
        let s2 = LatticeMask::for_frame(&spec, |x, y| x.abs() <= lo + grow && y.abs() <= lo + grow).unwrap();
        let a = localization_measure(&f, &spec, &s1).unwrap();
        let b = localization_measure(&f.scaled(cis(TAU * phase)), &spec, &s1).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!(localization_measure(&f, &spec, &s2).unwrap() >= a - 1e-12);
    }

    #[test]
    fn mollifier_has_unit_mass(dpos in 1usize..8) {
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 8).unwrap();
        let m = build_mollifier(dpos as f64 / 32.0, Band::Interval { lo: -1.0, hi: 1.0 }, 1e-2, g).unwrap();
        prop_assert!((m.phi_hat.values[0] - 1.0).norm() <= 1e-12);
    }

    #[test]
    fn routes_linearity_and_adjoint(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 8).unwrap();
        let m = SupportRegion::rect(g, 0.0, 0.75, -0.45, 0.45);
        let h = random_opw(&m, seed, 2).unwrap();
        let k = random_opw(&m, seed ^ 7, 2).unwrap();
        let f = signal(g, seed ^ 3);
        let u = signal(g, seed ^ 5);
        let s = h.apply_route(&f, Route::Spreading).unwrap();
        prop_assert!(s.rel_err(&h.apply_route(&f, Route::Kernel).unwrap()).unwrap() <= 1e-10);
        // linear in the signal
        let (ca, cb) = (C64::new(a, b), C64::new(b, -a));
        let mix = f.scaled(ca).add(&u.scaled(cb)).unwrap();
        let want = s.scaled(ca).add(&h.apply(&u).unwrap().scaled(cb)).unwrap();
        prop_assert!(h.apply(&mix).unwrap().sub(&want).unwrap().norm() <= 1e-10 * (1.0 + want.norm()));
        // linear in the operator
        let hk = h.combine(ca, &k, cb).unwrap();
        let want = s.scaled(ca).add(&k.apply(&f).unwrap().scaled(cb)).unwrap();
        prop_assert!(hk.apply(&f).unwrap().sub(&want).unwrap().norm() <= 1e-10 * (1.0 + want.norm()));
        // ⟨Hf, u⟩ = ⟨f, H*u⟩
        let lhs = s.inner(&u).unwrap();
        let rhs = f.inner(&h.apply_adjoint(&u).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn norm_ratio_is_bounded(seed in any::<u64>()) {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 8).unwrap();
        let h = random_opw(&SupportRegion::rect(g, 0.0, 0.75, -0.375, 0.375), seed, 4).unwrap();
        let norm = opsamp_core::operators::operator_norm_estimate(&h, seed).unwrap().value;
        let sup = sup_norm_on(&h, &|_, _| true).unwrap().value;
        prop_assert!(norm / sup > 0.1 && norm / sup < 10.0);
    }

    #[test]
    fn system_inverse_and_identifier_period(seed in any::<u64>()) {
        let s = SamplingScheme::geometry(3, 1.0, 0.125, 1.0 / 24.0, (0.0, 0.0), vec![(0, 0), (1, -1), (-1, 0)]).unwrap();
        let s = make_weights(&s, seed).unwrap();
        prop_assert!(s.inverse_residual() <= 1e-10);
        prop_assert!(full_spark_certificate(&s.c, 1e-8).full_spark);
        let g = GridSpec::new(1.0 / 8.0, 8, 3, 8).unwrap();
        let w = realize_identifier(&s, g, None, None).unwrap().signal;
        let lt = 3 * 8;
        prop_assert!(w.shifted(lt).rel_err(&w).unwrap() <= 1e-14);
    }
}

fn three_cell(seed: u64) -> (SamplingScheme, GridSpec, BandlimitedOperator) {
    let s = SamplingScheme::geometry(3, 1.0, 0.125, 1.0 / 24.0, (0.0, 0.0), vec![(0, 0), (1, -1), (-1, 0)]).unwrap();
    let s = with_weights(&s, make_weights(&s, 11).unwrap().c).unwrap();
    let g = GridSpec::new(1.0 / 16.0, 16, 3, 8).unwrap();
    let om = 1.0 / 3.0;
    let rects: Vec<_> = s
        .shifts
        .iter()
        .map(|&(k, n)| {
            let (t, y) = (k as f64, n as f64 * om);
            opsamp_core::operators::Rect::new(t + 0.2, t + 0.8, y - 0.08, y + 0.08)
        })
        .collect();
    let m = SupportRegion::from_rects(g, &rects);
    (s, g, random_opw(&m, seed, 2).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, failure_persistence: None, ..ProptestConfig::default() })]

    // two independent reconstructions of the same data agree
    #[test]
    fn kernel_and_coefficient_paths_agree(seed in any::<u64>()) {
        let (s, g, h) = three_cell(seed);
        let om = 1.0 / 3.0;
        let resp = h.apply(&realize_identifier(&s, g, None, None).unwrap().signal).unwrap();
        let wl = build_pou_pair_split(PouKind::Linear, 1.0, om, s.delta_t, s.delta_nu, g).unwrap();
        let wq = build_pou_pair_split(PouKind::Quadratic, 1.0, om, s.delta_t, s.delta_nu, g).unwrap();
        let k = recover_kernel_general(&resp, &s, &wl).unwrap();
        let tab = discrete_coefficients(&resp, &s, &wq, 3.0, 2.0).unwrap();
        let sym = symbol_from_coefficients(&tab, None, Axis::full(g)).unwrap();
        prop_assert!(k.symbol().unwrap().rel_linf(&sym).unwrap() <= 1e-6);
    }

    // nested atom sets never increase the symbol error on the innermost set
    #[test]
    fn subset_chain_is_monotone(seed in any::<u64>()) {
        let (s, g, h) = three_cell(seed);
        let om = 1.0 / 3.0;
        let resp = h.apply(&realize_identifier(&s, g, None, None).unwrap().signal).unwrap();
        let wq = build_pou_pair_split(PouKind::Quadratic, 1.0, om, s.delta_t, s.delta_nu, g).unwrap();
        let tab = discrete_coefficients(&resp, &s, &wq, 3.0, 2.0).unwrap();
        let truth = h.convert(opsamp_core::operators::Representation::Symbol).unwrap();
        let d = g.dual();
        let inner = |x: f64, xi: f64| x.abs() <= 2.0 && xi.abs() <= 1.0;
        let mut prev = f64::INFINITY;
        for r in [2.5, 4.0, 6.0, 1e9] {
            let keep = move |x: f64, xi: f64| x.abs() <= r && xi.abs() <= r / 2.0;
            let est = symbol_from_coefficients(&tab, Some(&keep), Axis::full(g)).unwrap();
            let mut err: f64 = 0.0;
            for x in 0..g.n() {
                for k in 0..d.n() {
                    if inner(g.coord(x), d.coord(k)) {
                        err = err.max((est.get(x, k) - truth.get(x, k)).norm());
                    }
                }
            }
            prop_assert!(err <= prev + 1e-12);
            prev = err;
        }
        prop_assert!(prev <= 1e-10 * truth.max_abs());
    }

    // coefficients stay within a fixed multiple of μ = ‖σ‖∞
    #[test]
    fn coefficients_are_bounded_by_the_symbol(seed in any::<u64>()) {
        let (s, g, h) = three_cell(seed);
        let om = 1.0 / 3.0;
        let resp = h.apply(&realize_identifier(&s, g, None, None).unwrap().signal).unwrap();
        let wq = build_pou_pair_split(PouKind::Quadratic, 1.0, om, s.delta_t, s.delta_nu, g).unwrap();
        let tab = discrete_coefficients(&resp, &s, &wq, 3.0, 2.0).unwrap();
        let mu = sup_norm_on(&h, &|_, _| true).unwrap().value;
        // ‖r‖₁‖φ‖₁-type constant of the window pair
        let c = wq.r.values.iter().map(|v| v.norm()).sum::<f64>() * g.dt
            * wq.phi.values.iter().map(|v| v.norm()).sum::<f64>() * g.dt;
        prop_assert!(tab.max_abs() <= c * mu, "{} > {} μ", tab.max_abs(), c);
    }
}
