//! Smoothing of the piecewise-linear potential away from the branch point.
//!
//! On the upstairs circle the tropical potential is r^k F(θ) with
//! F(θ) = a cos kθ + b sin kθ on each arc. Near each corner α the value is
//! replaced by the convex combination ϕ m_δ r^k F(α) + (1 − ϕ) r^k F(θ),
//! ϕ = bump((r/R)(θ − α), δ), so the windows have half-width δ at r = R and
//! shrink like 1/r.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::smooth::bump;
use crate::error::{Error, Result};
use crate::multisection::{Arc, CoveringKind};

/// How deck transformations act on (θ, sheet).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub kind: CoveringKind,
    pub degree: usize,
}

impl Cover {
    /// Number of sheets that carry their own θ-circle.
    pub fn sheets(&self) -> usize {
        match self.kind {
            CoveringKind::Maximal => 1,
            CoveringKind::Split => self.degree,
        }
    }

    /// The j-th deck translate of (θ, sheet).
    pub fn deck(&self, theta: f64, sheet: usize, j: usize) -> (f64, usize) {
        match self.kind {
            CoveringKind::Maximal => (theta + TAU * j as f64 / self.degree as f64, sheet),
            CoveringKind::Split => (theta, (sheet + j) % self.degree),
        }
    }

    /// θ-range over which the first sheet is compared with its translates.
    pub fn fundamental_range(&self) -> f64 {
        match self.kind {
            CoveringKind::Maximal => TAU / self.degree as f64,
            CoveringKind::Split => TAU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corner {
    pub alpha: f64,
    pub component: usize,
    /// F(α), continuous across the corner.
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OuterPotential {
    pub arcs: Vec<Arc>,
    pub cover: Cover,
    pub k: usize,
    pub corners: Vec<Corner>,
    pub delta: f64,
    pub m_delta: f64,
    pub big_r: f64,
    #[serde(skip)]
    comps: Vec<Vec<usize>>,
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

impl OuterPotential {
    fn arc_at(&self, theta: f64, comp: usize) -> &Arc {
        let ids = &self.comps[comp];
        let t0 = self.arcs[ids[0]].theta_start;
        let t = t0 + (theta - t0).rem_euclid(TAU);
        let pos = ids.partition_point(|&i| self.arcs[i].theta_start <= t);
        &self.arcs[ids[pos.max(1) - 1]]
    }

    /// Unsmoothed angular profile F(θ) on a sheet.
    pub fn f(&self, theta: f64, sheet: usize) -> f64 {
        let comp = self.component_of(sheet);
        self.arc_at(theta, comp).f(theta)
    }

    fn component_of(&self, sheet: usize) -> usize {
        match self.cover.kind {
            CoveringKind::Maximal => 0,
            CoveringKind::Split => sheet,
        }
    }

    /// Tropical potential r^k F(θ).
    pub fn tropical(&self, r: f64, theta: f64, sheet: usize) -> f64 {
        r.powi(self.k as i32) * self.f(theta, sheet)
    }

    /// Smoothed potential φ_{≥R}.
    pub fn value(&self, r: f64, theta: f64, sheet: usize) -> f64 {
        self.value_with(r, theta, sheet, self.m_delta)
    }

    /// As [`value`](Self::value) with a chosen corner constant (used to build counterexamples).
    pub fn value_with(&self, r: f64, theta: f64, sheet: usize, m: f64) -> f64 {
        let comp = self.component_of(sheet);
        let rk = r.powi(self.k as i32);
        let base = rk * self.f(theta, sheet);
        let half = self.delta * self.big_r / r;
        for c in self.corners.iter().filter(|c| c.component == comp) {
            let dist = wrap_pi(theta - c.alpha);
            if dist.abs() < half {
                let w = bump(dist * r / self.big_r, self.delta);
                return w * m * rk * c.value + (1.0 - w) * base;
            }
        }
        base
    }

    /// ΔF between a sheet and its j-th translate.
    pub fn delta_f(&self, theta: f64, sheet: usize, j: usize) -> f64 {
        let (t2, s2) = self.cover.deck(theta, sheet, j);
        self.f(theta, sheet) - self.f(t2, s2)
    }

    fn window_ratio(&self, delta: f64) -> Option<f64> {
        let mut worst = f64::INFINITY;
        for c in &self.corners {
            let sheet = c.component;
            for j in 1..self.cover.degree {
                let at = self.delta_f(c.alpha, sheet, j);
                for s in 0..=400 {
                    let t = c.alpha - delta + 2.0 * delta * s as f64 / 400.0;
                    let dv = self.delta_f(t, sheet, j);
                    if dv == 0.0 || (dv > 0.0) != (at > 0.0) {
                        return None;
                    }
                    worst = worst.min(dv.abs() / at.abs());
                }
            }
        }
        Some(worst)
    }
}

/// Build φ_{≥R} from circle arcs; `delta_request` caps the initial window size.
pub fn smooth_outer(arcs: &[Arc], big_r: f64, delta_request: Option<f64>) -> Result<OuterPotential> {
    if arcs.is_empty() {
        return Err(Error::InvalidData("no arcs".into()));
    }
    let n_comp = arcs.iter().map(|a| a.component).max().unwrap() + 1;
    let k = arcs[0].k;
    let cover = if n_comp == 2 {
        Cover { kind: CoveringKind::Split, degree: 2 }
    } else {
        Cover { kind: CoveringKind::Maximal, degree: k }
    };
    let mut comps = vec![Vec::new(); n_comp];
    for (i, a) in arcs.iter().enumerate() {
        comps[a.component].push(i);
    }
    // A base ray is singular when some lift has a corner over it; every lift of it gets a window.
    let mut singular = std::collections::BTreeSet::new();
    for ids in &comps {
        for (p, &i) in ids.iter().enumerate() {
            let next = &arcs[ids[(p + 1) % ids.len()]];
            if arcs[i].slope != next.slope {
                singular.insert(next.base_cone);
            }
        }
    }
    let mut corners = Vec::new();
    for (ci, ids) in comps.iter().enumerate() {
        for &i in ids {
            if singular.contains(&arcs[i].base_cone) {
                let alpha = arcs[i].theta_start.rem_euclid(TAU);
                corners.push(Corner { alpha, component: ci, value: arcs[i].f(alpha) });
            }
        }
    }
    let mut outer =
        OuterPotential { arcs: arcs.to_vec(), cover, k, corners, delta: 0.0, m_delta: 1.0, big_r, comps };

    for c in &outer.corners {
        for j in 1..cover.degree {
            let dv = outer.delta_f(c.alpha, c.component, j);
            if dv.abs() < 1e-12 {
                return Err(Error::GenericityViolated(format!("corner at θ = {} meets a translate", c.alpha)));
            }
        }
    }
    if outer.corners.is_empty() {
        outer.delta = delta_request.unwrap_or(0.1);
        return Ok(outer);
    }
    let mut alphas: Vec<(usize, f64)> = outer.corners.iter().map(|c| (c.component, c.alpha)).collect();
    alphas.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut gap = f64::INFINITY;
    for w in 0..alphas.len() {
        let (ca, a) = alphas[w];
        let same: Vec<f64> = alphas.iter().filter(|x| x.0 == ca).map(|x| x.1).collect();
        for &b in &same {
            let dist = wrap_pi(b - a).abs();
            if dist > 0.0 {
                gap = gap.min(dist);
            }
        }
    }
    if !gap.is_finite() {
        gap = TAU;
    }
    let mut delta = gap / 4.0;
    if let Some(dr) = delta_request {
        delta = delta.min(dr);
    }
    for _ in 0..60 {
        if let Some(ratio) = outer.window_ratio(delta) {
            outer.delta = delta;
            outer.m_delta = (0.9 * ratio).min(1.0);
            return Ok(outer);
        }
        delta *= 0.5;
    }
    Err(Error::GenericityViolated("no window size separates corners from crossings".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SignCheckReport {
    pub checked: usize,
    pub skipped: usize,
}

/// Central difference in r with step 1e-6 r.
pub fn d_dr(f: impl Fn(f64) -> f64, r: f64) -> f64 {
    let h = 1e-6 * r;
    (f(r + h) - f(r - h)) / (2.0 * h)
}

/// sign(Δφ) = sign(Δ∂_rφ) at every sample with nonzero difference.
pub fn radial_sign_check(outer: &OuterPotential, samples: &[(f64, f64)]) -> Result<SignCheckReport> {
    radial_sign_check_with(outer, samples, outer.m_delta)
}

pub fn radial_sign_check_with(outer: &OuterPotential, samples: &[(f64, f64)], m: f64) -> Result<SignCheckReport> {
    let mut checked = 0;
    let mut skipped = 0;
    for &(r, theta) in samples {
        for sheet in 0..outer.cover.sheets() {
            for j in 1..outer.cover.degree {
                let (t2, s2) = outer.cover.deck(theta, sheet, j);
                let diff = |rr: f64| outer.value_with(rr, theta, sheet, m) - outer.value_with(rr, t2, s2, m);
                let dv = diff(r);
                if dv.abs() <= 1e-12 * r.powi(outer.k as i32) {
                    skipped += 1;
                    continue;
                }
                let dr = d_dr(diff, r);
                if (dv > 0.0) != (dr > 0.0) {
                    return Err(Error::SignRelationViolated { r, theta });
                }
                checked += 1;
            }
        }
    }
    Ok(SignCheckReport { checked, skipped })
}
