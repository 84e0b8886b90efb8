//! Rank-2 Kaneyama bundles E_{a,b,c} on P², their tropical data and the
//! inverse map from tropical data back to bundle parameters.
//!
//! E_{a,b,c} is the cokernel of O → O(aD0) ⊕ O(bD1) ⊕ O(cD2), 1 ↦ (Z0^a, Z1^b, Z2^c).
//! On the P² fan, D1, D2, D0 are the divisors of rays 0, 1, 2, i.e. of
//! (1,0), (0,1), (−1,−1). A bundle record stands for (E or E*) ⊗ O(D).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{divisor_character, Fan, LatticeVector, ToricDivisor};
use crate::multisection::{
    ext_prediction, genericity_count, realizability_from_report, topology_prediction, validate, Case, CoveringKind,
    Lift, RayLift, TropicalMultiSection, DEFAULT_D_MAX_FACTOR,
};

/// Ray index of D0, D1, D2 on the standard P² fan.
const RAY_OF_D: [usize; 3] = [2, 0, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KaneyamaBundle {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    /// Coefficients (k0, k1, k2) of D = k0 D0 + k1 D1 + k2 D2.
    pub twist: [i64; 3],
    pub dual: bool,
}

impl KaneyamaBundle {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        KaneyamaBundle { a, b, c, twist: [0; 3], dual: false }
    }

    pub fn twisted(mut self, k: [i64; 3]) -> Self {
        for i in 0..3 {
            self.twist[i] += k[i];
        }
        self
    }

    pub fn dualized(mut self) -> Self {
        self.dual = !self.dual;
        self
    }

    pub fn divisor(&self) -> ToricDivisor {
        divisor_from_d_coeffs(self.twist)
    }

    fn check(&self) -> Result<()> {
        if self.a == 0 || self.b == 0 || self.c == 0 {
            return Err(Error::InvalidData("a, b, c must be positive".into()));
        }
        Ok(())
    }

    /// The same bundle written in the other (dual or non-dual) form, using E* ≅ E ⊗ det(E)^{-1}.
    pub fn equivalent_form(&self) -> KaneyamaBundle {
        let det = [self.a as i64, self.b as i64, self.c as i64];
        let mut out = *self;
        out.dual = !self.dual;
        for i in 0..3 {
            out.twist[i] += if self.dual { -det[i] } else { det[i] };
        }
        out
    }
}

fn divisor_from_d_coeffs(k: [i64; 3]) -> ToricDivisor {
    let mut coeffs = vec![0; 3];
    for (i, &ray) in RAY_OF_D.iter().enumerate() {
        coeffs[ray] = k[i];
    }
    ToricDivisor::new(coeffs)
}

/// The two torus weights of the fiber at the fixed point of maximal cone `sigma`.
pub fn fixed_point_characters(kb: &KaneyamaBundle, fan: &Fan, sigma: usize) -> Result<[LatticeVector; 2]> {
    if !fan.is_standard_p2() {
        return Err(Error::NotP2Fan);
    }
    if sigma >= fan.n_maximal() {
        return Err(Error::NonMaximalCone(sigma));
    }
    kb.check()?;
    // The ray missing from sigma is the divisor whose coordinate is invertible there.
    let missing_ray = (sigma + 2) % 3;
    let degs = [kb.a as i64, kb.b as i64, kb.c as i64];
    let mut w = Vec::with_capacity(2);
    for (i, &ray) in RAY_OF_D.iter().enumerate() {
        if ray == missing_ray {
            continue;
        }
        let mut coeffs = vec![0; 3];
        coeffs[ray] = degs[i];
        w.push(divisor_character(fan, &ToricDivisor::new(coeffs), sigma)?);
    }
    let shift = divisor_character(fan, &kb.divisor(), sigma)?;
    let sign = if kb.dual { -1 } else { 1 };
    let mut out = [w[0].scale(sign) + shift, w[1].scale(sign) + shift];
    out.sort_by_key(|m| (m.x, m.y));
    Ok(out)
}

/// Tropical data of the bundle: two lifts per cone, glued along rays where the weights agree.
pub fn kaneyama_tropicalize(kb: &KaneyamaBundle) -> Result<TropicalMultiSection> {
    let fan = Fan::standard_p2();
    let weights: Vec<[LatticeVector; 2]> =
        (0..3).map(|s| fixed_point_characters(kb, &fan, s)).collect::<Result<_>>()?;
    let mut lifts = Vec::new();
    for (c, w) in weights.iter().enumerate() {
        for (s, &m) in w.iter().enumerate() {
            lifts.push(Lift { cone: c, sheet: s, slope: m, mult: 1 });
        }
    }
    let mut adjacency = Vec::new();
    for ray in 0..3 {
        let v = fan.ray(ray);
        let prev = &weights[(ray + 2) % 3];
        let cur = &weights[ray];
        for (fs, mf) in prev.iter().enumerate() {
            let matches: Vec<usize> = (0..2).filter(|&ts| mf.dot(v) == cur[ts].dot(v)).collect();
            if matches.len() != 1 {
                return Err(Error::GluingInconsistent(format!(
                    "lift {fs} of cone {} has {} partners across ray {ray}",
                    (ray + 2) % 3,
                    matches.len()
                )));
            }
            adjacency.push(RayLift { ray, from_sheet: fs, to_sheet: matches[0], mult: 1 });
        }
    }
    let ts = TropicalMultiSection { fan, degree: 2, kind: CoveringKind::Maximal, lifts, adjacency };
    let rep = validate(&ts);
    if !rep.valid {
        return Err(Error::GluingInconsistent(format!("{:?}", rep.violations)));
    }
    Ok(ts)
}

/// Result of inverting tropical data: the non-dual parameters and the equal dual form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityMatch {
    pub bundle: KaneyamaBundle,
    pub dual_form: KaneyamaBundle,
}

impl RigidityMatch {
    pub fn contains(&self, kb: &KaneyamaBundle) -> bool {
        *kb == self.bundle || *kb == self.dual_form
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum RigidityOutcome {
    Match(RigidityMatch),
    NotInFamily,
}

/// Recover (a, b, c, D, dual) from 2-fold tropical data on the P² fan.
///
/// The differences of the two sheet values on rays D0, D1, D2 are a, b, c;
/// the remaining translate on each cone is m_D. Candidates are confirmed by
/// re-tropicalizing and comparing slope multisets.
pub fn rigidity_invert(ts: &TropicalMultiSection) -> Result<RigidityOutcome> {
    if !ts.fan.is_standard_p2() {
        return Err(Error::NotP2Fan);
    }
    if ts.degree != 2 || ts.kind != CoveringKind::Maximal || !validate(ts).valid {
        return Ok(RigidityOutcome::NotInFamily);
    }
    let slopes = ts.slope_multisets();
    if slopes.iter().any(|s| s.len() != 2) {
        return Ok(RigidityOutcome::NotInFamily);
    }
    let gap = |ray: usize| -> i64 {
        let v = ts.fan.ray(ray);
        (slopes[ray][0].dot(v) - slopes[ray][1].dot(v)).abs()
    };
    let (a, b, c) = (gap(RAY_OF_D[0]), gap(RAY_OF_D[1]), gap(RAY_OF_D[2]));
    if a == 0 || b == 0 || c == 0 {
        return Ok(RigidityOutcome::NotInFamily);
    }
    let base = KaneyamaBundle::new(a as u32, b as u32, c as u32);
    let fan = &ts.fan;
    // Translates of cone 0 and cone 1 determine k1, k2 and k0.
    let translates = |cone: usize| -> Result<Vec<LatticeVector>> {
        let w = fixed_point_characters(&base, fan, cone)?;
        let s = &slopes[cone];
        let mut out = Vec::new();
        for perm in [[0, 1], [1, 0]] {
            let t0 = s[0] - w[perm[0]];
            let t1 = s[1] - w[perm[1]];
            if t0 == t1 && !out.contains(&t0) {
                out.push(t0);
            }
        }
        Ok(out)
    };
    let mut found: Vec<KaneyamaBundle> = Vec::new();
    for t0 in translates(0)? {
        for t1 in translates(1)? {
            // m_D on cone 0 is (−k1, −k2); on cone 1, ⟨m, (−1,−1)⟩ = −k0.
            if t1.y != t0.y {
                continue;
            }
            let k = [t1.x + t1.y, -t0.x, -t0.y];
            let cand = base.twisted(k);
            if kaneyama_tropicalize(&cand)?.slope_multisets() == slopes && !found.contains(&cand) {
                found.push(cand);
            }
        }
    }
    match found.len() {
        0 => Ok(RigidityOutcome::NotInFamily),
        1 => Ok(RigidityOutcome::Match(RigidityMatch { bundle: found[0], dual_form: found[0].equivalent_form() })),
        _ => Err(Error::AmbiguousMatch(format!("{found:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorSummary {
    pub bundle: KaneyamaBundle,
    #[serde(rename = "N")]
    pub n: u32,
    pub d: u32,
    pub genus: u32,
    pub punctures: u32,
    pub betti: [u32; 3],
    pub ext: [u32; 3],
    pub simply_connected: bool,
    pub exact: bool,
}

/// Tropicalize, count, decide, and predict topology and Ext for one bundle.
pub fn mirror_summary(kb: &KaneyamaBundle) -> Result<MirrorSummary> {
    let ts = kaneyama_tropicalize(kb)?;
    let rep = genericity_count(&ts);
    let n = rep.n.ok_or_else(|| Error::GenericityViolated(format!("{:?}", rep.failure_reason)))?;
    let verdict = realizability_from_report(&rep, DEFAULT_D_MAX_FACTOR * 2);
    let d = verdict.d.ok_or(Error::NotRealizable(n))?;
    let topo = topology_prediction(n, Case::O)?;
    let ext = ext_prediction(n)?;
    let simply_connected = topo.b1 == 0;
    Ok(MirrorSummary {
        bundle: *kb,
        n,
        d,
        genus: topo.genus,
        punctures: topo.punctures,
        betti: [topo.b0, topo.b1, topo.b2],
        ext: [ext.0, ext.1, ext.2],
        simply_connected,
        exact: simply_connected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn e111_weights_in_chart_zero() {
        let fan = Fan::standard_p2();
        let w = fixed_point_characters(&KaneyamaBundle::new(1, 1, 1), &fan, 0).unwrap();
        let d1 = divisor_character(&fan, &ToricDivisor::prime(&fan, 0), 0).unwrap();
        let d2 = divisor_character(&fan, &ToricDivisor::prime(&fan, 1), 0).unwrap();
        let mut expect = [d1, d2];
        expect.sort_by_key(|m| (m.x, m.y));
        assert_eq!(w, expect);
        assert_eq!(w, [lv(-1, 0), lv(0, -1)]);
    }

    #[test]
    fn twist_and_dual_weights() {
        let fan = Fan::standard_p2();
        let kb = KaneyamaBundle::new(1, 2, 3);
        for s in 0..3 {
            let w = fixed_point_characters(&kb, &fan, s).unwrap();
            let tw = fixed_point_characters(&kb.twisted([1, -2, 0]), &fan, s).unwrap();
            let shift = divisor_character(&fan, &divisor_from_d_coeffs([1, -2, 0]), s).unwrap();
            let mut exp = [w[0] + shift, w[1] + shift];
            exp.sort_by_key(|m| (m.x, m.y));
            assert_eq!(tw, exp);
            let du = fixed_point_characters(&kb.dualized(), &fan, s).unwrap();
            let mut neg = [-w[0], -w[1]];
            neg.sort_by_key(|m| (m.x, m.y));
            assert_eq!(du, neg);
        }
    }

    #[test]
    fn non_p2_rejected() {
        let fan = crate::fan::build_fan(&[lv(1, 0), lv(0, 1), lv(-1, 0), lv(0, -1)]).unwrap();
        assert_eq!(fixed_point_characters(&KaneyamaBundle::new(1, 1, 1), &fan, 0), Err(Error::NotP2Fan));
    }

    #[test]
    fn e111_is_three_generic() {
        let ts = kaneyama_tropicalize(&KaneyamaBundle::new(1, 1, 1)).unwrap();
        assert_eq!(genericity_count(&ts).n, Some(3));
        let ts = kaneyama_tropicalize(&KaneyamaBundle::new(1, 2, 3)).unwrap();
        assert_eq!(genericity_count(&ts).n, Some(3));
    }

    #[test]
    fn dual_is_det_twist() {
        let kb = KaneyamaBundle::new(2, 3, 5).twisted([1, 0, -1]).dualized();
        let eq = kb.equivalent_form();
        assert!(!eq.dual);
        assert_eq!(
            kaneyama_tropicalize(&kb).unwrap().slope_multisets(),
            kaneyama_tropicalize(&eq).unwrap().slope_multisets()
        );
        assert_eq!(eq.equivalent_form(), kb);
    }

    #[test]
    fn inversion_round_trip() {
        for kb in [
            KaneyamaBundle::new(1, 2, 3),
            KaneyamaBundle::new(1, 1, 1).twisted([1, 0, 0]).dualized(),
        ] {
            match rigidity_invert(&kaneyama_tropicalize(&kb).unwrap()).unwrap() {
                RigidityOutcome::Match(m) => assert!(m.contains(&kb), "{m:?} vs {kb:?}"),
                RigidityOutcome::NotInFamily => panic!("lost {kb:?}"),
            }
        }
    }

    #[test]
    fn n_one_not_in_family() {
        let ts = TropicalMultiSection::from_ray_values(&Fan::standard_p2(), 2, CoveringKind::Maximal, &[1, 1, 1, 0, 0, 0])
            .unwrap();
        assert_eq!(rigidity_invert(&ts).unwrap(), RigidityOutcome::NotInFamily);
    }

    #[test]
    fn summaries() {
        let s = mirror_summary(&KaneyamaBundle::new(1, 1, 1)).unwrap();
        assert_eq!((s.n, s.d, s.genus, s.betti, s.ext, s.simply_connected), (3, 1, 0, [1, 0, 0], [1, 0, 0], true));
        let (m, n) = (5i64, 2i64);
        let k = (m - n) as u32;
        let other = mirror_summary(&KaneyamaBundle::new(k, k, k).twisted([2 * n - m, 0, 0])).unwrap();
        assert_eq!((other.n, other.betti, other.ext), (s.n, s.betti, s.ext));
        let du = mirror_summary(&KaneyamaBundle::new(1, 1, 1).dualized()).unwrap();
        assert_eq!((du.n, du.betti, du.ext, du.exact), (s.n, s.betti, s.ext, s.exact));
    }
}
