//! Point clouds of the realized Lagrangian and a brute-force collision scan.
//!
//! A domain sample l = (r, θ) maps to ξ = l^q, and the fibre coordinate
//! satisfies x₁ − i x₂ = (r ∂_rφ − i ∂_θφ) / (q ξ). Inside r < R − ε the
//! potential is the local model, so x = ±√f(ξ) continued radially from the
//! value on the circle r = R − ε.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::glue::GluedPotential;
use crate::error::Result;
use crate::multisection::CoveringKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CloudPoint {
    pub r: f64,
    pub theta: f64,
    pub sheet: usize,
    pub xi: [f64; 2],
    pub x: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct PointCloud {
    pub nr: usize,
    pub ntheta: usize,
    pub sheets: usize,
    pub r_max: f64,
    /// Samples at l = 0 where p_std is not a local diffeomorphism.
    pub branch_point_skipped: usize,
    /// Indexed [sheet][i_r − 1][j_θ], i_r = 1..=nr.
    pub points: Vec<CloudPoint>,
}

impl PointCloud {
    pub fn at(&self, sheet: usize, i: usize, j: usize) -> &CloudPoint {
        &self.points[(sheet * self.nr + (i - 1)) * self.ntheta + j % self.ntheta]
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "r,theta,xi1,xi2,x1,x2,sheet")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                g6(p.r),
                g6(p.theta),
                g6(p.xi[0]),
                g6(p.xi[1]),
                g6(p.x[0]),
                g6(p.x[1]),
                p.sheet
            )?;
        }
        Ok(())
    }
}

/// Six significant digits.
pub fn g6(v: f64) -> String {
    crate::io::round_sig(v, 6).to_string()
}

pub fn covector(r: f64, theta: f64, q: usize, phi_r: f64, phi_t: f64) -> [f64; 2] {
    let xi = Complex64::from_polar(r.powi(q as i32), q as f64 * theta);
    let s = Complex64::new(r * phi_r, -phi_t) / (xi * q as f64);
    [s.re, -s.im]
}

/// Sample the Lagrangian on (0, r_max] × [0, 2π) with nr × ntheta points per sheet.
pub fn sample_lagrangian(gp: &GluedPotential, r_max: f64, nr: usize, ntheta: usize) -> Result<PointCloud> {
    let sheets = gp.outer.cover.sheets();
    let q = gp.inner.q;
    let r_in = gp.big_r - gp.eps;
    let radii: Vec<f64> = (1..=nr).map(|i| r_max * i as f64 / nr as f64).collect();
    let thetas: Vec<f64> = (0..ntheta).map(|j| std::f64::consts::TAU * j as f64 / ntheta as f64).collect();
    let ht = 1e-6;

    // x on the outer part from finite differences of the glued potential.
    let outer_rows: Vec<Option<Vec<Vec<[f64; 2]>>>> = radii
        .par_iter()
        .map(|&r| {
            if r < r_in {
                return Ok(None);
            }
            let h = 1e-6 * r;
            let (s0, sm, sp) = (gp.slice(r)?, gp.slice(r - h)?, gp.slice(r + h)?);
            Ok(Some(
                (0..sheets)
                    .map(|s| {
                        thetas
                            .iter()
                            .map(|&t| {
                                let pr = (sp.value(t, s) - sm.value(t, s)) / (2.0 * h);
                                let pt = (s0.value(t + ht, s) - s0.value(t - ht, s)) / (2.0 * ht);
                                covector(r, t, q, pr, pt)
                            })
                            .collect()
                    })
                    .collect(),
            ))
        })
        .collect::<Result<_>>()?;

    // Seed for the radial continuation: the value on r = R − ε.
    let h = 1e-6 * r_in;
    let (s0, sm, sp) = (gp.slice(r_in)?, gp.slice(r_in - h)?, gp.slice(r_in + h)?);
    let seed: Vec<Vec<Complex64>> = (0..sheets)
        .map(|s| {
            thetas
                .iter()
                .map(|&t| {
                    let pr = (sp.value(t, s) - sm.value(t, s)) / (2.0 * h);
                    let pt = (s0.value(t + ht, s) - s0.value(t - ht, s)) / (2.0 * ht);
                    let x = covector(r_in, t, q, pr, pt);
                    Complex64::new(x[0], -x[1])
                })
                .collect()
        })
        .collect();

    let f = &gp.inner.poly;
    let inner_cols: Vec<Vec<Vec<Complex64>>> = (0..sheets)
        .map(|s| {
            (0..ntheta)
                .into_par_iter()
                .map(|j| {
                    let t = thetas[j];
                    let mut prev = seed[s][j];
                    let mut prev2: Option<Complex64> = None;
                    let mut col = vec![Complex64::new(0.0, 0.0); nr];
                    for i in (0..nr).rev() {
                        if radii[i] >= r_in {
                            continue;
                        }
                        let xi = Complex64::from_polar(radii[i].powi(q as i32), q as f64 * t);
                        let root = f.eval_c(xi).sqrt();
                        let guess = match prev2 {
                            Some(p2) => prev * 2.0 - p2,
                            None => prev,
                        };
                        let v = if (root - guess).norm() <= (-root - guess).norm() { root } else { -root };
                        col[i] = v;
                        prev2 = Some(prev);
                        prev = v;
                    }
                    col
                })
                .collect()
        })
        .collect();
    // The two sheets of the model are ±√f; the continuation is run on the
    // first one only, since rays through roots of f leave its sign ambiguous.
    let mut inner_cols = inner_cols;
    match gp.outer.cover.kind {
        CoveringKind::Split => {
            let neg: Vec<Vec<Complex64>> = inner_cols[0].iter().map(|c| c.iter().map(|v| -v).collect()).collect();
            inner_cols[1] = neg;
        }
        CoveringKind::Maximal if ntheta % 2 == 0 => {
            for j in 0..ntheta / 2 {
                let neg: Vec<Complex64> = inner_cols[0][j].iter().map(|v| -v).collect();
                inner_cols[0][j + ntheta / 2] = neg;
            }
        }
        CoveringKind::Maximal => {}
    }

    let mut points = Vec::with_capacity(sheets * nr * ntheta);
    for s in 0..sheets {
        for (i, &r) in radii.iter().enumerate() {
            for (j, &t) in thetas.iter().enumerate() {
                let x = match &outer_rows[i] {
                    Some(rows) => rows[s][j],
                    None => {
                        let v = inner_cols[s][j][i];
                        [v.re, -v.im]
                    }
                };
                let xi = Complex64::from_polar(r.powi(q as i32), q as f64 * t);
                let sheet = match gp.outer.cover.kind {
                    CoveringKind::Maximal => usize::from(t >= std::f64::consts::PI),
                    CoveringKind::Split => s,
                };
                points.push(CloudPoint { r, theta: t, sheet, xi: [xi.re, xi.im], x });
            }
        }
    }
    Ok(PointCloud { nr, ntheta, sheets, r_max, branch_point_skipped: sheets * ntheta, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HitKind {
    OnRoot,
    OffRoot,
    /// Still too coarse to decide after refinement.
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Collision {
    pub xi: [f64; 2],
    pub r: f64,
    pub theta: f64,
    pub kind: HitKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionScan {
    pub compared: usize,
    pub refined: usize,
    pub branch_point_skipped: usize,
    pub on_root: usize,
    pub off_root: usize,
    pub unresolved: usize,
    pub hits: Vec<Collision>,
}

type V2 = [f64; 2];

/// Winding number of a closed polygon of vectors around 0; None when an edge
/// turns by π/2 or more.
fn winding(ds: &[V2], tiny: f64) -> Option<i32> {
    if ds.iter().any(|d| d[0].hypot(d[1]) <= tiny) {
        return Some(1);
    }
    let mut turn = 0.0;
    for k in 0..ds.len() {
        let (a, b) = (ds[k], ds[(k + 1) % ds.len()]);
        let d = (b[1].atan2(b[0]) - a[1].atan2(a[0]) + PI).rem_euclid(TAU) - PI;
        if d.abs() >= PI / 2.0 {
            return None;
        }
        turn += d;
    }
    Some((turn / TAU).round() as i32)
}

/// x(p) − x(γp) at one point, straight from the glued potential.
fn deck_difference(gp: &GluedPotential, r: f64, t: f64) -> Result<V2> {
    let h = 1e-6 * r;
    let ht = 1e-6;
    let (s0, sm, sp) = (gp.slice(r)?, gp.slice(r - h)?, gp.slice(r + h)?);
    let x = |t: f64, s: usize| {
        let pr = (sp.value(t, s) - sm.value(t, s)) / (2.0 * h);
        let pt = (s0.value(t + ht, s) - s0.value(t - ht, s)) / (2.0 * ht);
        covector(r, t, gp.inner.q, pr, pt)
    };
    let (t2, s2) = gp.outer.cover.deck(t, 0, 1);
    let (a, b) = (x(t, 0), x(t2, s2));
    Ok([a[0] - b[0], a[1] - b[1]])
}

fn turn(a: V2, b: V2) -> f64 {
    (b[1].atan2(b[0]) - a[1].atan2(a[0]) + PI).rem_euclid(TAU) - PI
}

/// Turn of D along the segment p → q in (r, θ), bisecting until every piece
/// turns by less than π/2 or stays close to a chord that misses the origin.
fn edge_turn(gp: &GluedPotential, p: V2, q: V2, dp: V2, dq: V2, depth: u32) -> Result<Option<f64>> {
    let t = turn(dp, dq);
    if t.abs() < PI / 2.0 {
        return Ok(Some(t));
    }
    if depth == 0 {
        return Ok(None);
    }
    let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
    let dm = deck_difference(gp, m[0], m[1])?;
    let chord = [dq[0] - dp[0], dq[1] - dp[1]];
    let len = chord[0].hypot(chord[1]);
    let dist = (dp[0] * chord[1] - dp[1] * chord[0]).abs() / len.max(f64::MIN_POSITIVE);
    let dev = (dm[0] - (dp[0] + dq[0]) / 2.0).hypot(dm[1] - (dp[1] + dq[1]) / 2.0);
    if t.abs() < 0.95 * PI && 4.0 * dev < dist {
        return Ok(Some(t));
    }
    match (edge_turn(gp, p, m, dp, dm, depth - 1)?, edge_turn(gp, m, q, dm, dq, depth - 1)?) {
        (Some(a), Some(b)) => Ok(Some(a + b)),
        _ => Ok(None),
    }
}

const EDGE_DEPTH: u32 = 16;

/// Winding of D around the cell [r0, r1] × [t0, t1] with adaptive edges.
fn boundary_winding(gp: &GluedPotential, r0: f64, r1: f64, t0: f64, t1: f64, tiny: f64) -> Result<Option<i32>> {
    let corners = [[r0, t0], [r1, t0], [r1, t1], [r0, t1]];
    let ds = corners.iter().map(|c| deck_difference(gp, c[0], c[1])).collect::<Result<Vec<_>>>()?;
    if ds.iter().any(|d| d[0].hypot(d[1]) <= tiny) {
        return Ok(Some(1));
    }
    let mut total = 0.0;
    for k in 0..4 {
        match edge_turn(gp, corners[k], corners[(k + 1) % 4], ds[k], ds[(k + 1) % 4], EDGE_DEPTH)? {
            Some(t) => total += t,
            None => return Ok(None),
        }
    }
    Ok(Some((total / TAU).round() as i32))
}

/// Scan every grid cell for a zero of D = x(p) − x(γp), γ the deck
/// transformation; a cell is hit when D winds around 0 along its boundary
/// (or vanishes at a corner). Inside the model disc the two sheets are ±√f
/// and their labels are aligned cell by cell, so branch cuts of the radial
/// continuation do not register. Cells whose boundary is sampled too
/// coarsely are re-evaluated with adaptively bisected edges. Hits near simple roots of
/// f are branch points, hits near double roots are the immersed points.
pub fn self_intersection_scan(cloud: &PointCloud, gp: &GluedPotential) -> Result<CollisionScan> {
    let (nr, nt) = (cloud.nr, cloud.ntheta);
    let cover = gp.outer.cover;
    let clusters = &gp.inner.clusters;
    let r_in = gp.big_r - gp.eps;
    let jmax = match cover.kind {
        CoveringKind::Maximal => nt / 2,
        CoveringKind::Split => nt,
    };
    let deck = |i: usize, j: usize| match cover.kind {
        CoveringKind::Maximal => cloud.at(0, i, j + nt / 2),
        CoveringKind::Split => cloud.at(1, i, j),
    };
    let diff = |i: usize, j: usize| {
        let (p, q) = (cloud.at(0, i, j), deck(i, j));
        [p.x[0] - q.x[0], p.x[1] - q.x[1]]
    };
    let scale = cloud.points.iter().fold(0.0f64, |m, p| m.max(p.x[0].abs()).max(p.x[1].abs()));
    let tiny = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let cells: Vec<(usize, usize)> = (1..nr).flat_map(|i| (0..jmax).map(move |j| (i, j))).collect();
    let dt = std::f64::consts::TAU / nt as f64;

    enum Outcome {
        Clear,
        Branch,
        Hit(Collision, bool),
    }
    let outcomes: Vec<Outcome> = cells
        .par_iter()
        .map(|&(i, j)| {
            // boundary of the cell, counterclockwise in (r, θ)
            let mut ds = [diff(i, j), diff(i + 1, j), diff(i + 1, j + 1), diff(i, j + 1)];
            let inner = cloud.at(0, i + 1, j).r < r_in;
            if inner {
                for k in 1..4 {
                    let (a, b) = (ds[k - 1], ds[k]);
                    if (a[0] + b[0]).hypot(a[1] + b[1]) < (a[0] - b[0]).hypot(a[1] - b[1]) {
                        ds[k] = [-b[0], -b[1]];
                    }
                }
            }
            let pts = [cloud.at(0, i, j), cloud.at(0, i + 1, j), cloud.at(0, i + 1, j + 1), cloud.at(0, i, j + 1)];
            let xi = pts.iter().map(|p| Complex64::new(p.xi[0], p.xi[1])).sum::<Complex64>() / 4.0;
            let diam = pts.iter().fold(0.0f64, |m, p| m.max((Complex64::new(p.xi[0], p.xi[1]) - xi).norm()));
            let near = clusters.iter().find(|c| (c.root - xi).norm() <= 2.0 * diam + 1e-9);
            let mut refined = false;
            let hit = match winding(&ds, tiny) {
                Some(0) => return Ok(Outcome::Clear),
                Some(_) => Some(true),
                None if near.is_some() => Some(true),
                None if inner => None,
                None => {
                    refined = true;
                    let (r0, r1) = (pts[0].r, pts[1].r);
                    let t0 = j as f64 * dt;
                    boundary_winding(gp, r0, r1, t0, t0 + dt, tiny)?.map(|w| w != 0)
                }
            };
            let kind = match (hit, near) {
                (Some(false), _) => return Ok(Outcome::Clear),
                (_, Some(c)) if c.multiplicity == 1 => return Ok(Outcome::Branch),
                (_, Some(_)) => HitKind::OnRoot,
                (Some(true), None) => HitKind::OffRoot,
                (None, None) => HitKind::Unresolved,
            };
            Ok(Outcome::Hit(Collision { xi: [xi.re, xi.im], r: pts[0].r, theta: pts[0].theta, kind }, refined))
        })
        .collect::<Result<_>>()?;
    let branch = outcomes.iter().filter(|o| matches!(o, Outcome::Branch)).count();
    let refined = outcomes.iter().filter(|o| matches!(o, Outcome::Hit(_, true))).count();
    let hits: Vec<Collision> = outcomes
        .into_iter()
        .filter_map(|o| match o {
            Outcome::Hit(c, _) => Some(c),
            _ => None,
        })
        .collect();
    let count = |k: HitKind| hits.iter().filter(|h| h.kind == k).count();
    Ok(CollisionScan {
        compared: cells.len() - branch,
        refined,
        branch_point_skipped: branch + cloud.branch_point_skipped,
        on_root: count(HitKind::OnRoot),
        off_root: count(HitKind::OffRoot),
        unresolved: count(HitKind::Unresolved),
        hits,
    })
}
