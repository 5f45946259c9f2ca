use super::scheme::{is_prime, SamplingScheme};
use crate::error::{Error, Result};
use crate::operators::SupportRegion;
use crate::tfcore::GridSpec;
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverOptions {
    pub l_max: usize,
    /// Restrict T to these values; all grid-compatible periods otherwise.
    pub t_candidates: Option<Vec<f64>>,
    /// Origin offsets tried per cell side.
    pub origin_steps: usize,
    /// Smallest admissible number of samples per T and per Ω.
    pub min_samples: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        Self { l_max: 7, t_candidates: None, origin_steps: 16, min_samples: 4 }
    }
}

#[derive(Debug, Clone)]
pub struct CoverResult {
    pub scheme: SamplingScheme,
    /// Same circle as the region's grid, relabelled so that n_per_t·dt = T.
    pub grid: GridSpec,
    /// Cells of the tiling that meet the region (before dummy padding).
    pub occupied: usize,
    /// min(δ_t/T, δ_ν/Ω) of the chosen cover.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    l: usize,
    m: i64,
    k_om: i64,
    t0: i64,
    g0: i64,
    dt_idx: i64,
    dnu_idx: i64,
    score: f64,
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

struct Evaluation {
    cells: Vec<(i64, i64)>,
    pads: Option<(i64, i64, f64)>,
}

// Cells met by the points and the best paddings (δ_t, δ_ν in samples) for
// origin (t0, g0).
fn evaluate(points: &[(i64, i64)], l: usize, m: i64, k_om: i64, t0: i64, g0: i64) -> Option<Evaluation> {
    let mut cells = HashSet::new();
    let mut located = Vec::with_capacity(points.len());
    for &(t, g) in points {
        let tt = t - t0;
        let k = div_floor(tt, m);
        let u = tt - k * m;
        let gg = 2 * (g - g0) + k_om;
        let n = div_floor(gg, 2 * k_om);
        let v = gg - n * 2 * k_om;
        if cells.insert((k, n)) && cells.len() > l {
            return None;
        }
        located.push((k, n, u, v));
    }
    let li = l as i64;
    let mut res: Vec<(i64, i64)> = cells.iter().map(|&(k, n)| (k.rem_euclid(li), n.rem_euclid(li))).collect();
    res.sort_unstable();
    res.dedup();
    if res.len() != cells.len() {
        return None;
    }
    // (t distance in samples, γ distance in half samples) to each
    // neighbouring cell that is not selected
    let mut cons: Vec<(i64, i64)> = Vec::new();
    for &(k, n, u, v) in &located {
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                if (a, b) == (0, 0) || cells.contains(&(k + a, n + b)) {
                    continue;
                }
                let ct = match a {
                    -1 => u,
                    1 => m - u,
                    _ => 0,
                };
                let cg = match b {
                    -1 => v,
                    1 => 2 * k_om - v,
                    _ => 0,
                };
                cons.push((ct, cg));
            }
        }
    }
    cons.sort_unstable_by_key(|c| c.1);
    let mut best: Option<(i64, i64, f64)> = None;
    let mut idx = 0;
    let mut tmax = (m - 1) / 2;
    let mut d = 1;
    while 2 * d < k_om {
        while idx < cons.len() && cons[idx].1 < 2 * d {
            tmax = tmax.min(cons[idx].0);
            idx += 1;
        }
        if tmax < 1 {
            break;
        }
        let score = (tmax as f64 / m as f64).min(d as f64 / k_om as f64);
        if best.map_or(true, |b| score > b.2 + 1e-12) {
            best = Some((tmax, d, score));
        }
        d += 1;
    }
    let mut cells: Vec<(i64, i64)> = cells.into_iter().collect();
    cells.sort_unstable();
    Some(Evaluation { cells, pads: best })
}

fn origins(len: i64, steps: usize) -> Vec<i64> {
    let mut v: Vec<i64> = (0..steps.max(1))
        .map(|i| ((i as f64 * len as f64 / steps.max(1) as f64).round() as i64).rem_euclid(len))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Smallest L (1 or prime) and a grid-aligned T × Ω tiling, with
/// TΩ = 1/L and a translated origin, such that the padded region meets at
/// most L cells with distinct residues mod L.
pub fn find_cover(region: &SupportRegion, opts: &CoverOptions) -> Result<CoverResult> {
    region.check_area()?;
    if region.is_empty() {
        return Err(Error::Degenerate("empty support region".into()));
    }
    let grid = region.grid;
    let dual = grid.dual();
    let n = grid.n() as i64;
    let points: Vec<(i64, i64)> =
        region.cells.iter().map(|&(t, g)| (grid.centered(t), dual.centered(g))).collect();
    let wanted: Option<Vec<i64>> = match &opts.t_candidates {
        Some(ts) => Some(ts.iter().map(|&t| grid.steps("T", t)).collect::<Result<_>>()?),
        None => None,
    };
    let mut diagnostics = Vec::new();
    let ls = std::iter::once(1).chain((2..=opts.l_max).filter(|&l| is_prime(l)));
    for l in ls {
        let li = l as i64;
        let mut best: Option<Candidate> = None;
        let mut occupied = 0;
        for m in (1..=n / li).rev() {
            if n % (li * m) != 0 {
                continue;
            }
            if let Some(w) = &wanted {
                if !w.contains(&m) {
                    continue;
                }
            }
            let k_om = n / (li * m);
            let min = opts.min_samples as i64;
            if m < min || k_om < min {
                continue;
            }
            let mut min_cells = usize::MAX;
            for &t0 in &origins(m, opts.origin_steps) {
                for &g0 in &origins(k_om, opts.origin_steps) {
                    let Some(ev) = evaluate(&points, l, m, k_om, t0, g0) else {
                        continue;
                    };
                    min_cells = min_cells.min(ev.cells.len());
                    let Some((dt_idx, dnu_idx, score)) = ev.pads else { continue };
                    let better = match best {
                        None => true,
                        Some(b) => score > b.score + 1e-12 || ((score - b.score).abs() <= 1e-12 && m > b.m),
                    };
                    if better {
                        best = Some(Candidate { l, m, k_om, t0, g0, dt_idx, dnu_idx, score });
                        occupied = ev.cells.len();
                    }
                }
            }
            diagnostics.push(if min_cells == usize::MAX {
                format!("L={l} T={}: more than L cells or clashing residues", m as f64 * grid.dt)
            } else {
                format!("L={l} T={}: {min_cells} cells but no admissible padding", m as f64 * grid.dt)
            });
        }
        if let Some(c) = best {
            return build(region, &points, c, occupied);
        }
    }
    Err(Error::NoCover { l_max: opts.l_max, diagnostics: diagnostics.join("; ") })
}

fn build(region: &SupportRegion, points: &[(i64, i64)], c: Candidate, occupied: usize) -> Result<CoverResult> {
    let grid = region.grid;
    let ev = evaluate(points, c.l, c.m, c.k_om, c.t0, c.g0).expect("candidate was feasible");
    let li = c.l as i64;
    let mut shifts = ev.cells.clone();
    let mut used: HashSet<(i64, i64)> = shifts.iter().map(|&(k, n)| (k.rem_euclid(li), n.rem_euclid(li))).collect();
    // dummy cells for unused residues, nearest to the origin first
    let mut r: i64 = 0;
    while shifts.len() < c.l {
        for k in -r..=r {
            for nn in -r..=r {
                if k.abs().max(nn.abs()) != r || shifts.len() >= c.l {
                    continue;
                }
                let res = (k.rem_euclid(li), nn.rem_euclid(li));
                if !used.contains(&res) && !shifts.contains(&(k, nn)) {
                    used.insert(res);
                    shifts.push((k, nn));
                }
            }
        }
        r += 1;
    }
    let t_period = c.m as f64 * grid.dt;
    let dnu = grid.dnu();
    let scheme = SamplingScheme::geometry(
        c.l,
        t_period,
        c.dt_idx as f64 * grid.dt,
        c.dnu_idx as f64 * dnu,
        (c.t0 as f64 * grid.dt, c.g0 as f64 * dnu),
        shifts,
    )?;
    let out_grid = GridSpec::new(grid.dt, c.m as usize, c.l, c.k_om as usize)?;
    Ok(CoverResult { scheme, grid: out_grid, occupied, margin: c.score })
}

/// Whether every point of the δ-padded region lies in a scheme cell.
pub fn covers(scheme: &SamplingScheme, region: &SupportRegion) -> bool {
    let grid = region.grid;
    let dual = grid.dual();
    let (dt, dn) = (scheme.delta_t * (1.0 - 1e-9), scheme.delta_nu * (1.0 - 1e-9));
    region.cells.iter().all(|&(t, g)| {
        let (x, y) = (grid.coord(t), dual.coord(g));
        [-dt, 0.0, dt]
            .iter()
            .all(|&a| [-dn, 0.0, dn].iter().all(|&b| scheme.cell_of(x + a, y + b).is_some()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Rect;

    fn sorted(mut v: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
        v.sort_unstable();
        v
    }

    #[test]
    fn rectangle_gives_single_cell() {
        let g = GridSpec::new(1.0 / 32.0, 32, 1, 16).unwrap();
        let m = SupportRegion::rect(g, 0.0, 0.9, -0.45, 0.45);
        let c = find_cover(&m, &CoverOptions::default()).unwrap();
        assert_eq!(c.scheme.l, 1);
        assert_eq!(c.scheme.shifts.len(), 1);
        assert!(covers(&c.scheme, &m));
        assert!(c.scheme.t_period * c.scheme.omega == 1.0);
    }

    #[test]
    fn two_blocks_need_two_cells() {
        let g = GridSpec::new(1.0 / 32.0, 32, 2, 32).unwrap();
        let m = SupportRegion::from_rects(
            g,
            &[Rect::new(0.05, 0.95, 0.02, 0.31), Rect::new(1.05, 1.95, -0.31, -0.02)],
        );
        let opts = CoverOptions { t_candidates: Some(vec![1.0]), ..Default::default() };
        let c = find_cover(&m, &opts).unwrap();
        assert_eq!(c.scheme.l, 2);
        assert_eq!(sorted(c.scheme.shifts.clone()), vec![(0, 0), (1, -1)]);
        assert!((c.scheme.origin_gamma - 0.25).abs() < 1e-12);
        assert_eq!(c.scheme.origin_t, 0.0);
        assert!(covers(&c.scheme, &m));
        // the same blocks with the γ origin at 0 land in three cells
        let naive = SamplingScheme::geometry(2, 1.0, 0.0, 0.0, (0.0, 0.0), vec![(0, 0), (1, 0)]).unwrap();
        assert!(!covers(&naive, &m));
    }

    #[test]
    fn three_blocks_need_three_cells() {
        let g = GridSpec::new(1.0 / 32.0, 32, 3, 24).unwrap();
        let om = 1.0 / 3.0;
        let blocks: Vec<Rect> = [(0, 0), (1, -1), (-1, 0)]
            .iter()
            .map(|&(k, n)| {
                let (t, y) = (k as f64, n as f64 * om);
                Rect::new(t + 0.05, t + 0.95, y - 0.15, y + 0.15)
            })
            .collect();
        let m = SupportRegion::from_rects(g, &blocks);
        let opts = CoverOptions { t_candidates: Some(vec![1.0]), ..Default::default() };
        let c = find_cover(&m, &opts).unwrap();
        assert_eq!(c.scheme.l, 3);
        assert_eq!(sorted(c.scheme.shifts.clone()), vec![(-1, 0), (0, 0), (1, -1)]);
        assert!(covers(&c.scheme, &m));
        let res: Vec<(i64, i64)> = c.scheme.shifts.iter().map(|&(k, n)| (k.rem_euclid(3), n.rem_euclid(3))).collect();
        assert_eq!(sorted(res), vec![(0, 0), (1, 2), (2, 0)]);
    }

    #[test]
    fn too_large_region_is_rejected() {
        let g = GridSpec::new(1.0 / 16.0, 16, 1, 16).unwrap();
        let m = SupportRegion::rect(g, 0.0, 1.5, -0.4, 0.4);
        assert!(find_cover(&m, &CoverOptions::default()).is_err());
    }

    #[test]
    fn unspecified_period_still_finds_a_cover() {
        let g = GridSpec::new(1.0 / 32.0, 32, 2, 32).unwrap();
        let m = SupportRegion::from_rects(
            g,
            &[Rect::new(0.05, 0.95, 0.02, 0.31), Rect::new(1.05, 1.95, -0.31, -0.02)],
        );
        let c = find_cover(&m, &CoverOptions::default()).unwrap();
        assert!(c.scheme.l <= 3);
        assert!(covers(&c.scheme, &m));
        assert!(c.margin > 0.0);
    }
}
