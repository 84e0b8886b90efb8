//! Tropical Lagrangian multi-sections: validation, circle restriction,
//! genericity and the invariants predicted for their realizations.

mod genericity;
mod predict;

pub use genericity::{
    circle_restriction, circle_restriction_with, genericity_count, Arc, Crossing, FailureReason,
    GenericityReport, PairCount, UpstairsCircle,
};
pub use predict::{
    ext_prediction, realizability, realizability_from_report, topology_prediction,
    tropical_conical_lagrangian, Case, Realizability, RealizabilityVerdict, TopologyPrediction,
    DEFAULT_D_MAX_FACTOR,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{divisor_character, Fan, LatticeVector, ToricDivisor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringKind {
    /// Connected covering of the punctured plane (Case O for r = 2).
    Maximal,
    /// Two disjoint sheets (Case E, r = 2 only).
    Split,
}

/// A lift of maximal cone `cone`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    pub cone: usize,
    pub sheet: usize,
    pub slope: LatticeVector,
    #[serde(default = "one")]
    pub mult: u32,
}

/// A lift of ray `ray`, joining lift `from_sheet` of cone `ray - 1` to lift `to_sheet` of cone `ray`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayLift {
    pub ray: usize,
    pub from_sheet: usize,
    pub to_sheet: usize,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalMultiSection {
    pub fan: Fan,
    pub degree: usize,
    pub kind: CoveringKind,
    pub lifts: Vec<Lift>,
    pub adjacency: Vec<RayLift>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// Σμ over the lifts of a cone differs from the degree.
    MultiplicitySum { cone: String, sum: u32, expected: usize },
    /// Slopes of adjacent lifts differ on the shared ray.
    Discontinuity { ray: usize, from_sheet: usize, to_sheet: usize, jump: i64 },
    /// A ray lift refers to a lift that does not exist.
    MissingLift { cone: usize, sheet: usize },
    /// A lift of a maximal cone is not glued exactly once across one of its rays.
    Unglued { cone: usize, sheet: usize, ray: usize, count: usize },
    /// Multiplicities of glued lifts disagree.
    MultiplicityJump { ray: usize, from_sheet: usize, to_sheet: usize },
    /// The lift graph has the wrong number of components for the declared kind.
    CoveringMismatch { kind: CoveringKind, components: usize },
    /// Split coverings are modelled for r = 2 only.
    UnsupportedSplit { degree: usize },
    /// Duplicate (cone, sheet) label.
    DuplicateLift { cone: usize, sheet: usize },
    /// Cone index out of range.
    UnknownCone { cone: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl TropicalMultiSection {
    pub fn lift(&self, cone: usize, sheet: usize) -> Option<&Lift> {
        self.lifts.iter().find(|l| l.cone == cone && l.sheet == sheet)
    }

    pub fn lifts_over(&self, cone: usize) -> impl Iterator<Item = &Lift> {
        self.lifts.iter().filter(move |l| l.cone == cone)
    }

    /// Build 2-fold or r-fold data on a fan with unimodular maximal cones from
    /// the values of the potential at the upstairs rays.
    ///
    /// `Maximal`: `values` has `r * n` entries read counterclockwise along the
    /// connected upstairs circle starting over ray 0. `Split`: two blocks of
    /// `n` entries, one per sheet.
    pub fn from_ray_values(fan: &Fan, degree: usize, kind: CoveringKind, values: &[i64]) -> Result<Self> {
        let n = fan.n_rays();
        let slope_on = |c: usize, va: i64, vb: i64| -> Result<LatticeVector> {
            let (a, b) = fan.cone_rays(c);
            let det = a.cross(b);
            let mx = va * b.y - vb * a.y;
            let my = a.x * vb - b.x * va;
            if mx % det != 0 || my % det != 0 {
                return Err(Error::InvalidData(format!("ray values on cone {c} have no integral slope")));
            }
            Ok(LatticeVector::new(mx / det, my / det))
        };
        let mut lifts = Vec::new();
        let mut adjacency = Vec::new();
        match kind {
            CoveringKind::Maximal => {
                let len = degree * n;
                if values.len() != len {
                    return Err(Error::InvalidData(format!("expected {len} ray values, got {}", values.len())));
                }
                for p in 0..len {
                    let c = p % n;
                    let q = p / n;
                    let m = slope_on(c, values[p], values[(p + 1) % len])?;
                    lifts.push(Lift { cone: c, sheet: q, slope: m, mult: 1 });
                    let from_sheet = if c == 0 { (q + degree - 1) % degree } else { q };
                    adjacency.push(RayLift { ray: c, from_sheet, to_sheet: q, mult: 1 });
                }
            }
            CoveringKind::Split => {
                if degree != 2 || values.len() != 2 * n {
                    return Err(Error::InvalidData("split data needs degree 2 and 2n ray values".into()));
                }
                for s in 0..2 {
                    let block = &values[s * n..(s + 1) * n];
                    for c in 0..n {
                        let m = slope_on(c, block[c], block[(c + 1) % n])?;
                        lifts.push(Lift { cone: c, sheet: s, slope: m, mult: 1 });
                        adjacency.push(RayLift { ray: c, from_sheet: s, to_sheet: s, mult: 1 });
                    }
                }
            }
        }
        Ok(TropicalMultiSection { fan: fan.clone(), degree, kind, lifts, adjacency })
    }

    /// Slopes shifted by m_D(σ) on every cone.
    pub fn twisted(&self, d: &ToricDivisor) -> Result<Self> {
        let mut out = self.clone();
        for l in &mut out.lifts {
            l.slope = l.slope + divisor_character(&self.fan, d, l.cone)?;
        }
        Ok(out)
    }

    /// Slopes negated (the data of the dual bundle).
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        for l in &mut out.lifts {
            l.slope = -l.slope;
        }
        out
    }

    /// Lift slopes of each maximal cone as a sorted multiset.
    pub fn slope_multisets(&self) -> Vec<Vec<LatticeVector>> {
        (0..self.fan.n_maximal())
            .map(|c| {
                let mut v: Vec<_> = self
                    .lifts_over(c)
                    .flat_map(|l| std::iter::repeat(l.slope).take(l.mult as usize))
                    .collect();
                v.sort_by_key(|m| (m.x, m.y));
                v
            })
            .collect()
    }
}

/// Check the multiplicity, continuity and covering conditions.
pub fn validate(ts: &TropicalMultiSection) -> ValidationReport {
    let mut violations = Vec::new();
    let fan = &ts.fan;
    let n = fan.n_rays();

    if ts.kind == CoveringKind::Split && ts.degree != 2 {
        violations.push(Violation::UnsupportedSplit { degree: ts.degree });
    }

    let mut seen = BTreeMap::new();
    for l in &ts.lifts {
        if l.cone >= n {
            violations.push(Violation::UnknownCone { cone: l.cone });
            continue;
        }
        if seen.insert((l.cone, l.sheet), ()).is_some() {
            violations.push(Violation::DuplicateLift { cone: l.cone, sheet: l.sheet });
        }
    }

    for c in 0..n {
        let sum: u32 = ts.lifts_over(c).map(|l| l.mult).sum();
        if sum as usize != ts.degree {
            violations.push(Violation::MultiplicitySum { cone: format!("maximal {c}"), sum, expected: ts.degree });
        }
        let sum: u32 = ts.adjacency.iter().filter(|a| a.ray == c).map(|a| a.mult).sum();
        if sum as usize != ts.degree {
            violations.push(Violation::MultiplicitySum { cone: format!("ray {c}"), sum, expected: ts.degree });
        }
    }

    for a in &ts.adjacency {
        if a.ray >= n {
            violations.push(Violation::UnknownCone { cone: a.ray });
            continue;
        }
        let prev = (a.ray + n - 1) % n;
        let from = ts.lift(prev, a.from_sheet);
        let to = ts.lift(a.ray, a.to_sheet);
        match (from, to) {
            (Some(f), Some(t)) => {
                let jump = (f.slope - t.slope).dot(fan.ray(a.ray));
                if jump != 0 {
                    violations.push(Violation::Discontinuity {
                        ray: a.ray,
                        from_sheet: a.from_sheet,
                        to_sheet: a.to_sheet,
                        jump,
                    });
                }
                if f.mult != a.mult || t.mult != a.mult {
                    violations.push(Violation::MultiplicityJump {
                        ray: a.ray,
                        from_sheet: a.from_sheet,
                        to_sheet: a.to_sheet,
                    });
                }
            }
            _ => {
                if from.is_none() {
                    violations.push(Violation::MissingLift { cone: prev, sheet: a.from_sheet });
                }
                if to.is_none() {
                    violations.push(Violation::MissingLift { cone: a.ray, sheet: a.to_sheet });
                }
            }
        }
    }

    // Each lift is glued once on its clockwise ray and once on its counterclockwise ray.
    for l in &ts.lifts {
        if l.cone >= n {
            continue;
        }
        let cw = ts.adjacency.iter().filter(|a| a.ray == l.cone && a.to_sheet == l.sheet).count();
        let ccw_ray = (l.cone + 1) % n;
        let ccw = ts.adjacency.iter().filter(|a| a.ray == ccw_ray && a.from_sheet == l.sheet).count();
        if cw != 1 {
            violations.push(Violation::Unglued { cone: l.cone, sheet: l.sheet, ray: l.cone, count: cw });
        }
        if ccw != 1 {
            violations.push(Violation::Unglued { cone: l.cone, sheet: l.sheet, ray: ccw_ray, count: ccw });
        }
    }

    if violations.is_empty() {
        let comps = lift_components(ts);
        let expected = match ts.kind {
            CoveringKind::Maximal => 1,
            CoveringKind::Split => 2,
        };
        if comps != expected {
            violations.push(Violation::CoveringMismatch { kind: ts.kind, components: comps });
        }
    }

    ValidationReport { valid: violations.is_empty(), violations }
}

fn lift_components(ts: &TropicalMultiSection) -> usize {
    let idx: BTreeMap<(usize, usize), usize> =
        ts.lifts.iter().enumerate().map(|(i, l)| ((l.cone, l.sheet), i)).collect();
    let mut parent: Vec<usize> = (0..ts.lifts.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let n = ts.fan.n_rays();
    for a in &ts.adjacency {
        let prev = (a.ray + n - 1) % n;
        if let (Some(&i), Some(&j)) = (idx.get(&(prev, a.from_sheet)), idx.get(&(a.ray, a.to_sheet))) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    (0..ts.lifts.len()).filter(|&i| find(&mut parent, i) == i).count()
}
