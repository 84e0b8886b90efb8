//! φ = χ φ_{≥R} + (1 − χ) φ_f^ρ on the annulus around r = R.

use serde::Serialize;

use super::model::HyperellipticModel;
use super::outer::OuterPotential;
use super::rho::{RhoMap, RhoSlice};
use super::smooth::chi;
use crate::error::{Error, Result};

pub const MAX_HALVINGS: u32 = 60;

#[derive(Debug, Clone, Serialize)]
pub struct GluedPotential {
    pub outer: OuterPotential,
    #[serde(skip)]
    pub inner: HyperellipticModel,
    pub rho: RhoMap,
    pub big_r: f64,
    pub eps: f64,
    pub a_d: f64,
    pub halvings: u32,
    pub flip: bool,
    /// Excluded neighbourhoods of the crossing angles, as (centre, half-width).
    pub excluded: Vec<(f64, f64)>,
}

/// The glued potential at a fixed radius.
pub struct GluedSlice<'a> {
    gp: &'a GluedPotential,
    pub r: f64,
    pub chi: f64,
    rho: Option<RhoSlice>,
}

impl GluedSlice<'_> {
    pub fn inner(&self, theta: f64, sheet: usize) -> f64 {
        let t = self.rho.as_ref().map_or(theta, |s| s.eval(theta));
        self.gp.inner.phi_sheet(self.r, t, sheet)
    }

    pub fn value(&self, theta: f64, sheet: usize) -> f64 {
        if self.chi == 1.0 {
            return self.gp.outer.value(self.r, theta, sheet);
        }
        let inner = self.inner(theta, sheet);
        if self.chi == 0.0 {
            return inner;
        }
        self.chi * self.gp.outer.value(self.r, theta, sheet) + (1.0 - self.chi) * inner
    }
}

impl GluedPotential {
    pub fn slice(&self, r: f64) -> Result<GluedSlice<'_>> {
        let c = chi(r, self.big_r, self.eps);
        let rho = if c < 1.0 && r >= self.big_r - self.eps { Some(self.rho.slice(r)?) } else { None };
        Ok(GluedSlice { gp: self, r, chi: c, rho })
    }

    pub fn value(&self, r: f64, theta: f64, sheet: usize) -> Result<f64> {
        Ok(self.slice(r)?.value(theta, sheet))
    }

    pub fn in_excluded(&self, theta: f64) -> bool {
        let p = self.rho.period;
        self.excluded.iter().any(|&(c, w)| {
            let d = (theta - c).rem_euclid(p);
            d.min(p - d) < w
        })
    }
}

fn differences(outer: &OuterPotential, inner: &HyperellipticModel, rho: &RhoMap, r: f64, thetas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let s = rho.slice(r)?;
    let cover = outer.cover;
    Ok(thetas
        .iter()
        .map(|&t| {
            let (t2, s2) = cover.deck(t, 0, 1);
            let d_out = outer.value(r, t, 0) - outer.value(r, t2, s2);
            let d_in = inner.phi_sheet(r, s.eval(t), 0) - inner.phi_sheet(r, s.eval(t2), s2);
            (d_out, d_in)
        })
        .collect())
}

/// Choose the branch so the inner and outer differences agree in sign, then
/// halve a_d until |Δφ_f^ρ| ≤ |Δφ_{≥R}| on [R + ε, R + 1] away from the crossings.
pub fn glue(outer: &OuterPotential, model: &HyperellipticModel, rho: &RhoMap, a_d_initial: f64) -> Result<GluedPotential> {
    if model.rank != 2 || outer.cover.degree != 2 {
        return Err(Error::UnsupportedDegree(model.rank.max(outer.cover.degree)));
    }
    let big_r = rho.big_r;
    let eps = rho.eps;
    let period = rho.period;
    let src = &rho.sources;
    let n = src.len();
    let gaps: Vec<f64> = (0..n).map(|i| if i + 1 < n { src[i + 1] - src[i] } else { src[0] + period - src[i] }).collect();
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let width = min_gap / 8.0;
    let excluded: Vec<(f64, f64)> = src.iter().map(|&c| (c, width)).collect();
    let (big, _) = gaps.iter().enumerate().fold((0, 0.0), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
    let probe = src[big] + 0.5 * gaps[big];

    let base = model.with_leading(a_d_initial).with_flip(false);
    let (d_out, d_in) = differences(outer, &base, rho, big_r + eps, &[probe])?[0];
    if d_out == 0.0 || d_in == 0.0 {
        return Err(Error::GluingInconsistent("vanishing difference at the probe angle".into()));
    }
    let flip = (d_out > 0.0) != (d_in > 0.0);
    let inner0 = base.with_flip(flip);

    let m = 400;
    let thetas: Vec<f64> = (0..m).map(|k| period * k as f64 / m as f64).filter(|&t| {
        excluded.iter().all(|&(c, w)| {
            let d = (t - c).rem_euclid(period);
            d.min(period - d) >= w
        })
    }).collect();
    let mut ratio = 0.0f64;
    for j in 0..=20 {
        let r = big_r + eps + (1.0 - eps) * j as f64 / 20.0;
        for (d_out, d_in) in differences(outer, &inner0, rho, r, &thetas)? {
            if d_out == 0.0 {
                return Err(Error::ShrinkExhausted(MAX_HALVINGS));
            }
            ratio = ratio.max(d_in.abs() / d_out.abs());
        }
    }
    // |Δφ_f| scales like a_d^{1/r}.
    let per_halving = 0.5f64.powf(1.0 / model.rank as f64);
    let mut halvings = 0u32;
    while ratio > 1.0 {
        if halvings == MAX_HALVINGS {
            return Err(Error::ShrinkExhausted(MAX_HALVINGS));
        }
        halvings += 1;
        ratio *= per_halving;
    }
    let a_d = a_d_initial * 0.5f64.powi(halvings as i32);
    Ok(GluedPotential {
        outer: outer.clone(),
        inner: model.with_leading(a_d).with_flip(flip),
        rho: rho.clone(),
        big_r,
        eps,
        a_d,
        halvings,
        flip,
        excluded,
    })
}
