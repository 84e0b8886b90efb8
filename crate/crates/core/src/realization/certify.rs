//! Grid certification that the angular and radial embeddedness equations
//! have no common solution.
//!
//! For each cell the residuals A = Δ∂_θφ and B = Δ∂_rφ are sampled at the
//! corners; a residual certifies the cell if its smallest corner magnitude
//! exceeds the first-order slack L_r Δr/2 + L_θ Δθ/2, with the Lipschitz
//! constants sampled over the cell and its neighbours. Margins are relative
//! to each residual's largest magnitude on the band. Cells that fail are
//! subdivided twice (4 × 4 each time); a cell still failing at the finest
//! level is Violated when (A, B) winds around 0 along its boundary and
//! Inconclusive otherwise.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::glue::GluedPotential;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    Violated,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellRef {
    pub r: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionCertificate {
    pub r_min: f64,
    pub r_max: f64,
    pub verdict: Verdict,
    /// Smallest cell margin, relative to the residual scale on the band.
    pub margin: f64,
    pub worst_cell: CellRef,
    pub violated_cells: usize,
    pub inconclusive_cells: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddednessCertificate {
    pub resolution: usize,
    pub verdict: Verdict,
    pub margin: f64,
    pub cell: Option<CellRef>,
    pub regions: Vec<RegionCertificate>,
}

/// Run `f` on a pool sized by TROPLAG_THREADS when set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var("TROPLAG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// Residual nodes on a rectangle of the (r, θ) annulus.
struct Grid {
    r0: f64,
    dr: f64,
    t0: f64,
    dt: f64,
    nr: usize,
    nt: usize,
    periodic: bool,
    vals: Vec<Vec<(f64, f64)>>,
}

/// (A, B) at (nr + 1) × (nt + 1) nodes; with `periodic` the last θ column
/// is the first one again and is not evaluated twice.
fn eval_grid(gp: &GluedPotential, r0: f64, dr: f64, nr: usize, t0: f64, dt: f64, nt: usize, periodic: bool) -> Result<Grid> {
    let cover = gp.outer.cover;
    let ht = 1e-6;
    let vals = (0..=nr)
        .into_par_iter()
        .map(|i| {
            let r = r0 + dr * i as f64;
            let h = 1e-6 * r;
            let (s0, sm, sp) = (gp.slice(r)?, gp.slice(r - h)?, gp.slice(r + h)?);
            let cols = if periodic { nt } else { nt + 1 };
            let mut row: Vec<(f64, f64)> = (0..cols)
                .map(|j| {
                    let t = t0 + dt * j as f64;
                    let (t2, s2) = cover.deck(t, 0, 1);
                    let dth = |t: f64, s: usize| (s0.value(t + ht, s) - s0.value(t - ht, s)) / (2.0 * ht);
                    let drr = |t: f64, s: usize| (sp.value(t, s) - sm.value(t, s)) / (2.0 * h);
                    (dth(t, 0) - dth(t2, s2), drr(t, 0) - drr(t2, s2))
                })
                .collect();
            if periodic {
                row.push(row[0]);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Grid { r0, dr, t0, dt, nr, nt, periodic, vals })
}

#[derive(Debug, Clone, Copy)]
enum CellState {
    Certified,
    Violated,
    Inconclusive,
}

impl Grid {
    fn pick(c: (f64, f64), k: usize) -> f64 {
        if k == 0 {
            c.0
        } else {
            c.1
        }
    }

    fn corners(&self, i: usize, j: usize) -> [(f64, f64); 4] {
        [self.vals[i][j], self.vals[i + 1][j], self.vals[i + 1][j + 1], self.vals[i][j + 1]]
    }

    fn lipschitz(&self, i: usize, j: usize, k: usize) -> (f64, f64) {
        let v = self.corners(i, j).map(|c| Self::pick(c, k));
        ((v[1] - v[0]).abs().max((v[2] - v[3]).abs()) / self.dr, (v[3] - v[0]).abs().max((v[2] - v[1]).abs()) / self.dt)
    }

    /// Normalized margin of a cell; Lipschitz constants are sampled over the
    /// cell and its neighbours in the grid.
    fn margin(&self, i: usize, j: usize, scales: &[f64; 2]) -> f64 {
        let c = self.corners(i, j);
        let mut best = f64::NEG_INFINITY;
        for k in 0..2 {
            let (mut lr, mut lt) = (0.0f64, 0.0f64);
            for ii in i.saturating_sub(1)..(i + 2).min(self.nr) {
                let js: Vec<usize> = if self.periodic {
                    vec![(j + self.nt - 1) % self.nt, j, (j + 1) % self.nt]
                } else {
                    (j.saturating_sub(1)..(j + 2).min(self.nt)).collect()
                };
                for jj in js {
                    let (a, b) = self.lipschitz(ii, jj, k);
                    lr = lr.max(a);
                    lt = lt.max(b);
                }
            }
            let slack = lr * self.dr / 2.0 + lt * self.dt / 2.0;
            let low = c.iter().fold(f64::INFINITY, |m, &x| m.min(Self::pick(x, k).abs()));
            best = best.max((low - slack) / scales[k]);
        }
        best
    }

    /// Winding of (A, B) around the cell boundary: Some(w) when every edge
    /// turns by less than π/2, None when the sampling is too coarse to tell.
    fn winding(&self, i: usize, j: usize, scales: &[f64; 2]) -> Option<i32> {
        let w = self.corners(i, j).map(|(a, b)| (a / scales[0], b / scales[1]));
        if w.iter().any(|v| v.0.hypot(v.1) <= 1e-12) {
            return Some(1);
        }
        let mut turn = 0.0;
        for k in 0..4 {
            let (a, b) = (w[k], w[(k + 1) % 4]);
            let d = (b.1.atan2(b.0) - a.1.atan2(a.0) + PI).rem_euclid(TAU) - PI;
            if d.abs() > PI / 2.0 {
                return None;
            }
            turn += d;
        }
        Some((turn / TAU).round() as i32)
    }
}

const REFINE: usize = 4;
const MAX_DEPTH: u32 = 2;

/// Decide one cell, subdividing while the first-order bound is not enough.
fn decide(gp: &GluedPotential, grid: &Grid, i: usize, j: usize, scales: &[f64; 2], depth: u32) -> Result<(CellState, f64)> {
    let m = grid.margin(i, j, scales);
    if m > 0.0 {
        return Ok((CellState::Certified, m));
    }
    if depth == MAX_DEPTH {
        return Ok(match grid.winding(i, j, scales) {
            Some(w) if w != 0 => (CellState::Violated, m),
            _ => (CellState::Inconclusive, m),
        });
    }
    let r0 = grid.r0 + grid.dr * i as f64;
    let t0 = grid.t0 + grid.dt * j as f64;
    let n = REFINE;
    let sub = eval_grid(gp, r0, grid.dr / n as f64, n, t0, grid.dt / n as f64, n, false)?;
    let mut state = CellState::Certified;
    let mut margin = f64::INFINITY;
    for a in 0..n {
        for b in 0..n {
            let (st, mm) = decide(gp, &sub, a, b, scales, depth + 1)?;
            match (state, st) {
                (_, CellState::Violated) => state = CellState::Violated,
                (CellState::Certified, CellState::Inconclusive) => state = CellState::Inconclusive,
                _ => {}
            }
            margin = margin.min(mm);
        }
    }
    Ok((state, margin))
}

fn certify_region(gp: &GluedPotential, r_min: f64, r_max: f64, n: usize) -> Result<RegionCertificate> {
    let range = gp.outer.cover.fundamental_range();
    let grid = eval_grid(gp, r_min, (r_max - r_min) / n as f64, n, 0.0, range / n as f64, n, true)?;
    let scales: [f64; 2] = [0, 1].map(|k| {
        grid.vals.iter().flatten().fold(0.0f64, |m, &c| m.max(Grid::pick(c, k).abs())).max(f64::MIN_POSITIVE)
    });
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let decided: Vec<(CellState, f64)> =
        cells.par_iter().map(|&(i, j)| decide(gp, &grid, i, j, &scales, 0)).collect::<Result<_>>()?;
    let mut margin = f64::INFINITY;
    let mut worst = CellRef { r: r_min, theta: 0.0 };
    let (mut violated, mut inconclusive) = (0, 0);
    for (&(i, j), &(st, m)) in cells.iter().zip(&decided) {
        match st {
            CellState::Violated => violated += 1,
            CellState::Inconclusive => inconclusive += 1,
            CellState::Certified => {}
        }
        if m < margin {
            margin = m;
            worst = CellRef { r: r_min + (i as f64 + 0.5) * grid.dr, theta: (j as f64 + 0.5) * grid.dt };
        }
    }
    let verdict = if violated > 0 {
        Verdict::Violated
    } else if inconclusive > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Certified
    };
    Ok(RegionCertificate {
        r_min,
        r_max,
        verdict,
        margin,
        worst_cell: worst,
        violated_cells: violated,
        inconclusive_cells: inconclusive,
    })
}

/// Certify the bands [R − ε, R + ε], [R + ε, R + 1] and [R + 1, 2(R + 1)].
pub fn verify_embedding(gp: &GluedPotential, resolution: usize) -> Result<EmbeddednessCertificate> {
    let (r, e) = (gp.big_r, gp.eps);
    let bands = [(r - e, r + e), (r + e, r + 1.0), (r + 1.0, 2.0 * (r + 1.0))];
    let regions: Vec<RegionCertificate> = with_pool(|| {
        bands.iter().map(|&(a, b)| certify_region(gp, a, b, resolution)).collect::<Result<_>>()
    })?;
    let verdict = if regions.iter().any(|c| c.verdict == Verdict::Violated) {
        Verdict::Violated
    } else if regions.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Certified
    };
    let worst = regions.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)).unwrap();
    Ok(EmbeddednessCertificate {
        resolution,
        verdict,
        margin: worst.margin,
        cell: if verdict == Verdict::Certified { None } else { Some(worst.worst_cell) },
        regions,
    })
}
