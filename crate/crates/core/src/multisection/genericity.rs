use std::f64::consts::TAU;

use serde::{Serialize, Serializer};

use super::{validate, CoveringKind, TropicalMultiSection};
use crate::error::{Error, Result};
use crate::fan::{in_open_cone, LatticeVector};

/// The circle of directions upstairs, as the cyclic sequence of maximal-cone
/// lifts met when walking counterclockwise. One component for connected
/// coverings, two for split ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpstairsCircle {
    pub components: Vec<Vec<(usize, usize)>>,
}

impl UpstairsCircle {
    pub fn build(ts: &TropicalMultiSection) -> Result<Self> {
        let n = ts.fan.n_rays();
        let mut visited = std::collections::BTreeSet::new();
        let mut components = Vec::new();
        let mut starts: Vec<usize> = ts.lifts_over(0).map(|l| l.sheet).collect();
        starts.sort_unstable();
        for s0 in starts {
            if visited.contains(&(0, s0)) {
                continue;
            }
            let mut comp = Vec::new();
            let (mut c, mut s) = (0usize, s0);
            loop {
                if !visited.insert((c, s)) {
                    return Err(Error::InvalidData(format!("lift ({c}, {s}) visited twice")));
                }
                comp.push((c, s));
                let next = (c + 1) % n;
                let adj = ts
                    .adjacency
                    .iter()
                    .find(|a| a.ray == next && a.from_sheet == s)
                    .ok_or_else(|| Error::InvalidData(format!("lift ({c}, {s}) is not glued across ray {next}")))?;
                c = next;
                s = adj.to_sheet;
                if (c, s) == (0, s0) {
                    break;
                }
            }
            components.push(comp);
        }
        Ok(UpstairsCircle { components })
    }

    /// The arcs compared by deck pair `(i, j)` over base cone `c`.
    fn pair_arcs(&self, kind: CoveringKind, n: usize, i: usize, j: usize, c: usize) -> ((usize, usize), (usize, usize)) {
        match kind {
            CoveringKind::Maximal => (self.components[0][i * n + c], self.components[0][j * n + c]),
            CoveringKind::Split => (self.components[i][c], self.components[j][c]),
        }
    }
}

/// One lift arc on the upstairs circle with f(θ) = a cos(kθ) + b sin(kθ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub id: usize,
    pub component: usize,
    pub base_cone: usize,
    pub sheet: usize,
    pub slope: LatticeVector,
    pub a: i64,
    pub b: i64,
    pub k: usize,
    pub start: LatticeVector,
    pub end: LatticeVector,
    pub theta_start: f64,
    pub theta_end: f64,
}

impl Arc {
    pub fn f(&self, theta: f64) -> f64 {
        let kt = self.k as f64 * theta;
        self.a as f64 * kt.cos() + self.b as f64 * kt.sin()
    }
}

/// Arcs for r = 2 (k = 2 connected, k = 1 split).
pub fn circle_restriction(ts: &TropicalMultiSection) -> Result<Vec<Arc>> {
    circle_restriction_with(ts, false)
}

/// As [`circle_restriction`]; with `rank_r` set, degrees above 2 use k = r.
pub fn circle_restriction_with(ts: &TropicalMultiSection, rank_r: bool) -> Result<Vec<Arc>> {
    if ts.degree > 2 && !rank_r {
        return Err(Error::UnsupportedDegree(ts.degree));
    }
    let circle = UpstairsCircle::build(ts)?;
    let n = ts.fan.n_rays();
    let k = match ts.kind {
        CoveringKind::Maximal => ts.degree,
        CoveringKind::Split => 1,
    };
    let psi0 = ts.fan.ray(0).angle();
    let psi = |c: usize| {
        if c == n {
            psi0 + TAU
        } else {
            ts.fan.ray(c).angle()
        }
    };
    let mut arcs = Vec::new();
    for (comp_idx, comp) in circle.components.iter().enumerate() {
        for (p, &(c, s)) in comp.iter().enumerate() {
            let m = ts.lift(c, s).unwrap().slope;
            let turn = TAU * (p / n) as f64;
            arcs.push(Arc {
                id: arcs.len(),
                component: comp_idx,
                base_cone: c,
                sheet: s,
                slope: m,
                a: m.x,
                b: m.y,
                k,
                start: ts.fan.ray(c),
                end: ts.fan.ray(c + 1),
                theta_start: (psi(c) + turn) / k as f64,
                theta_end: (psi(c + 1) + turn) / k as f64,
            });
        }
    }
    Ok(arcs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FailureReason {
    /// A deck-translate difference vanishes at a ray.
    CornerHit { pair: (usize, usize), ray: usize },
    /// Two deck-translates coincide on a whole cone.
    CoincidingGraphs { pair: (usize, usize), cone: usize },
    /// Rank r: pair counts are not balanced around a common value.
    Unbalanced,
    /// Input failed validation.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub pair: (usize, usize),
    /// Base cone whose interior contains the crossing.
    pub arc_id: usize,
    pub lower: LatticeVector,
    pub upper: LatticeVector,
    /// Exact direction of the crossing, primitive.
    pub direction: LatticeVector,
    /// Angle of `direction` on the base circle.
    pub psi: f64,
    pub transversal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub pair: (usize, usize),
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityReport {
    #[serde(rename = "N", serialize_with = "ser_n")]
    pub n: Option<u32>,
    pub degree: usize,
    pub kind: CoveringKind,
    pub pair_counts: Vec<PairCount>,
    pub total: u32,
    pub crossings: Vec<Crossing>,
    pub failure_reason: Option<FailureReason>,
}

fn ser_n<S: Serializer>(n: &Option<u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(v) => s.serialize_u32(*v),
        None => s.serialize_str("Fail"),
    }
}

impl GenericityReport {
    pub fn succeeded(&self) -> bool {
        self.n.is_some()
    }

    /// Crossing angles on the upstairs circle for r = 2 in [0, π) (connected) or [0, 2π) (split).
    pub fn crossing_thetas(&self) -> Vec<f64> {
        let k = match self.kind {
            CoveringKind::Maximal => self.degree as f64,
            CoveringKind::Split => 1.0,
        };
        let mut t: Vec<f64> = self.crossings.iter().map(|c| c.psi / k).collect();
        t.sort_by(f64::total_cmp);
        t
    }

    fn failed(ts: &TropicalMultiSection, reason: FailureReason) -> Self {
        GenericityReport {
            n: None,
            degree: ts.degree,
            kind: ts.kind,
            pair_counts: vec![],
            total: 0,
            crossings: vec![],
            failure_reason: Some(reason),
        }
    }
}

/// Exact count of transversal crossings between deck-translates.
pub fn genericity_count(ts: &TropicalMultiSection) -> GenericityReport {
    if !validate(ts).valid {
        return GenericityReport::failed(ts, FailureReason::Invalid);
    }
    let circle = match UpstairsCircle::build(ts) {
        Ok(c) => c,
        Err(_) => return GenericityReport::failed(ts, FailureReason::Invalid),
    };
    let n = ts.fan.n_rays();
    let r = ts.degree;
    let mut pair_counts = Vec::new();
    let mut crossings = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let mut count = 0;
            for c in 0..n {
                let (la, lb) = circle.pair_arcs(ts.kind, n, i, j, c);
                let ma = ts.lift(la.0, la.1).unwrap().slope;
                let mb = ts.lift(lb.0, lb.1).unwrap().slope;
                let delta = ma - mb;
                if delta.is_zero() {
                    return GenericityReport::failed(ts, FailureReason::CoincidingGraphs { pair: (i, j), cone: c });
                }
                let (va, vb) = ts.fan.cone_rays(c);
                let (sa, sb) = (delta.dot(va), delta.dot(vb));
                if sa == 0 {
                    return GenericityReport::failed(ts, FailureReason::CornerHit { pair: (i, j), ray: c });
                }
                if sb == 0 {
                    return GenericityReport::failed(
                        ts,
                        FailureReason::CornerHit { pair: (i, j), ray: (c + 1) % n },
                    );
                }
                if (sa > 0) != (sb > 0) {
                    count += 1;
                    let u = delta.perp().primitive();
                    let dir = if in_open_cone(u, va, vb) { u } else { -u };
                    debug_assert!(in_open_cone(dir, va, vb));
                    crossings.push(Crossing {
                        pair: (i, j),
                        arc_id: c,
                        lower: va,
                        upper: vb,
                        direction: dir,
                        psi: dir.angle(),
                        transversal: true,
                    });
                }
            }
            pair_counts.push(PairCount { pair: (i, j), count });
        }
    }
    let total: u32 = pair_counts.iter().map(|p| p.count).sum();
    let npairs = (r * (r.saturating_sub(1)) / 2) as u32;
    let n_generic = if npairs == 0 {
        Some(0)
    } else {
        let lo = total / npairs;
        let hi = total.div_ceil(npairs);
        pair_counts.iter().all(|p| p.count == lo || p.count == hi).then_some(lo)
    };
    let failure_reason = if n_generic.is_none() { Some(FailureReason::Unbalanced) } else { None };
    if let (Some(nv), 2) = (n_generic, r) {
        assert_eq!(nv % 2 == 1, ts.kind == CoveringKind::Maximal, "parity law broken for N = {nv}");
    }
    GenericityReport { n: n_generic, degree: r, kind: ts.kind, pair_counts, total, crossings, failure_reason }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_fan, Fan};

    fn lv(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn restriction_coefficients() {
        let fan = build_fan(&[lv(1, 0), lv(0, 1), lv(-1, 0), lv(0, -1)]).unwrap();
        let ts = TropicalMultiSection::from_ray_values(&fan, 2, CoveringKind::Split, &[0, 0, 0, 0, 2, -1, -2, 1])
            .unwrap();
        let arcs = circle_restriction(&ts).unwrap();
        assert_eq!(arcs.len(), 8);
        let a = arcs.iter().find(|a| a.component == 1 && a.base_cone == 0).unwrap();
        assert_eq!((a.a, a.b, a.k), (2, -1, 1));
        let z = arcs.iter().find(|a| a.component == 0).unwrap();
        assert_eq!((z.a, z.b), (0, 0));
    }

    #[test]
    fn degree_three_needs_opt_in() {
        let fan = build_fan(&[lv(1, 0), lv(0, 1), lv(-1, 0), lv(0, -1)]).unwrap();
        let v = [0, -1, 1, -1, 1, 0, -1, 1, -1, 1, 0, 0];
        let ts = TropicalMultiSection::from_ray_values(&fan, 3, CoveringKind::Maximal, &v).unwrap();
        assert_eq!(circle_restriction(&ts), Err(Error::UnsupportedDegree(3)));
        let arcs = circle_restriction_with(&ts, true).unwrap();
        assert_eq!(arcs.len(), 12);
        assert!((arcs[11].theta_end - arcs[0].theta_start - TAU).abs() < 1e-12);
    }

    #[test]
    fn coinciding_sheets_fail() {
        let ts = TropicalMultiSection::from_ray_values(&Fan::standard_p2(), 2, CoveringKind::Split, &[0; 6]).unwrap();
        let rep = genericity_count(&ts);
        assert_eq!(rep.n, None);
        assert!(matches!(rep.failure_reason, Some(FailureReason::CoincidingGraphs { .. })));
    }

    #[test]
    fn corner_hit_fails() {
        let fan = build_fan(&[lv(1, 0), lv(0, 1), lv(-1, 0), lv(0, -1)]).unwrap();
        let ts = TropicalMultiSection::from_ray_values(&fan, 2, CoveringKind::Split, &[0, 0, 0, 0, 1, 0, -1, 0])
            .unwrap();
        assert!(matches!(genericity_count(&ts).failure_reason, Some(FailureReason::CornerHit { .. })));
    }

    #[test]
    fn n_one_instance() {
        let ts = TropicalMultiSection::from_ray_values(&Fan::standard_p2(), 2, CoveringKind::Maximal, &[1, 1, 1, 0, 0, 0])
            .unwrap();
        assert_eq!(genericity_count(&ts).n, Some(1));
    }
}
