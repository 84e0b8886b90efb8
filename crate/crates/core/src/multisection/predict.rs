use serde::{Deserialize, Serialize};

use super::{genericity_count, CoveringKind, GenericityReport, TropicalMultiSection};
use crate::error::{Error, Result};
use crate::fan::{orthogonal_span, ConeId, ConicalLagrangian, LatticeVector, Span, Stratum};

pub const DEFAULT_D_MAX_FACTOR: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realizability {
    Realizable,
    NotRealizable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityVerdict {
    pub status: Realizability,
    /// Degree of the inner polynomial f_d when a construction exists.
    pub d: Option<u32>,
    /// True when the glued construction yields an embedded realization.
    pub embedded: bool,
    pub reason: String,
}

impl RealizabilityVerdict {
    fn no(reason: String) -> Self {
        RealizabilityVerdict { status: Realizability::NotRealizable, d: None, embedded: false, reason }
    }
}

/// Verdict from the exact genericity count.
pub fn realizability(ts: &TropicalMultiSection) -> RealizabilityVerdict {
    let rep = genericity_count(ts);
    realizability_from_report(&rep, DEFAULT_D_MAX_FACTOR * ts.degree as u32)
}

pub fn realizability_from_report(rep: &GenericityReport, d_max: u32) -> RealizabilityVerdict {
    let Some(n) = rep.n else {
        return RealizabilityVerdict::no(format!("data are not generic ({:?})", rep.failure_reason));
    };
    match (rep.degree, rep.kind) {
        (2, CoveringKind::Maximal) => {
            if n >= 3 {
                RealizabilityVerdict {
                    status: Realizability::Realizable,
                    d: Some(n - 2),
                    embedded: true,
                    reason: format!("connected 2-fold data with N = {n} >= 3 glue to x^2 = f_{}", n - 2),
                }
            } else {
                RealizabilityVerdict::no(format!(
                    "a connected 2-fold covering needs N >= 3 crossings of the deck-translates, got N = {n}"
                ))
            }
        }
        (2, CoveringKind::Split) => {
            if n >= 4 {
                RealizabilityVerdict {
                    status: Realizability::Realizable,
                    d: Some(n - 2),
                    embedded: true,
                    reason: format!("split data with N = {n} >= 4 glue to x^2 = f_{}", n - 2),
                }
            } else {
                RealizabilityVerdict {
                    status: Realizability::Realizable,
                    d: None,
                    embedded: false,
                    reason: "split data are realized by the two sections separately".into(),
                }
            }
        }
        (r, CoveringKind::Maximal) if r >= 3 => {
            let r32 = r as u32;
            let found = (1..=d_max).find(|&d| {
                crate::fan::gcd(r as i64, d as i64) == 1
                    && (2 * (d + r32)) / r32 == n
                    && (r32 - 1) * (d + r32) == rep.total
            });
            match found {
                Some(d) => RealizabilityVerdict {
                    status: Realizability::Realizable,
                    d: Some(d),
                    embedded: true,
                    reason: format!("rank {r}: N = {n} = floor(2(d/r + 1)) with d = {d}, gcd(r, d) = 1"),
                },
                None => RealizabilityVerdict {
                    status: Realizability::Unknown,
                    d: None,
                    embedded: false,
                    reason: format!("no d <= {d_max} coprime to {r} matches N = {n} and {} crossings", rep.total),
                },
            }
        }
        (r, _) => RealizabilityVerdict {
            status: Realizability::Unknown,
            d: None,
            embedded: false,
            reason: format!("degree {r} not covered"),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    O,
    E,
}

impl Case {
    pub fn of(kind: CoveringKind) -> Case {
        match kind {
            CoveringKind::Maximal => Case::O,
            CoveringKind::Split => Case::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyPrediction {
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
    pub genus: u32,
    pub punctures: u32,
    pub immersed_points_allowed: u32,
}

pub fn topology_prediction(n: u32, case: Case) -> Result<TopologyPrediction> {
    let (odd_needed, name, min) = match case {
        Case::O => (true, "O", 3),
        Case::E => (false, "E", 4),
    };
    if (n % 2 == 1) != odd_needed {
        return Err(Error::ParityMismatch { n, case: name });
    }
    if n < min {
        return Err(Error::NotRealizable(n));
    }
    let (genus, punctures) = match case {
        Case::O => ((n - 3) / 2, 1),
        Case::E => ((n - 4) / 2, 2),
    };
    let d = n - 2;
    Ok(TopologyPrediction { b0: 1, b1: n - 3, b2: 0, genus, punctures, immersed_points_allowed: d / 2 })
}

/// Dimensions of Ext^0, Ext^1, Ext^2 of the mirror bundle.
pub fn ext_prediction(n: u32) -> Result<(u32, u32, u32)> {
    if n < 3 {
        return Err(Error::NotRealizable(n));
    }
    Ok((1, n - 3, 0))
}

/// Strata m(τ′) × (−τ) of the tropical data, one per lift cone.
pub fn tropical_conical_lagrangian(ts: &TropicalMultiSection) -> ConicalLagrangian {
    let fan = &ts.fan;
    let n = fan.n_rays();
    let mut strata = Vec::new();
    let origin_lifts = match ts.kind {
        CoveringKind::Maximal => 1,
        CoveringKind::Split => 2,
    };
    for _ in 0..origin_lifts {
        strata.push(Stratum { cone: ConeId::Origin, base: LatticeVector::ZERO, span: Span::Plane, lattice_translates: false });
    }
    for a in &ts.adjacency {
        let prev = (a.ray + n - 1) % n;
        let m = ts.lift(prev, a.from_sheet).map(|l| l.slope).unwrap_or_default();
        let span = orthogonal_span(fan, ConeId::Ray(a.ray));
        strata.push(Stratum { cone: ConeId::Ray(a.ray), base: m, span, lattice_translates: false });
    }
    for l in &ts.lifts {
        strata.push(Stratum { cone: ConeId::Maximal(l.cone), base: l.slope, span: Span::Point, lattice_translates: false });
    }
    ConicalLagrangian { strata }
}
