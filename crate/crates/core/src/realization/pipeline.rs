//! From tropical data to a certified glued potential.

use serde::{Deserialize, Serialize};

use super::certify::{verify_embedding, EmbeddednessCertificate};
use super::glue::{glue, GluedPotential};
use super::immersed::{immersed_points, ImmersedPointReport};
use super::model::{series_coefficients_rank, HyperellipticModel};
use super::outer::smooth_outer;
use super::poly::Polynomial;
use super::rho::build_rho;
use super::zeros::find_zeros;
use crate::error::{Error, Result};
use crate::multisection::{
    circle_restriction, genericity_count, realizability_from_report, GenericityReport, Realizability,
    RealizabilityVerdict, TropicalMultiSection, DEFAULT_D_MAX_FACTOR,
};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub series_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_d_initial: Option<f64>,
    /// Coefficients of f_d from the constant term up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<f64>>,
}

pub const DEFAULT_ORDER: usize = 40;
pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_RESOLUTION: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub eps: f64,
    #[serde(rename = "K")]
    pub series_order: usize,
    pub resolution: usize,
    pub a_d: f64,
    pub delta: f64,
    pub m_delta: f64,
    pub halvings: u32,
    pub flip: bool,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub genericity: GenericityReport,
    pub verdict: RealizabilityVerdict,
    pub glued: Option<GluedPotential>,
    pub parameters: Option<Parameters>,
    pub certificate: Option<EmbeddednessCertificate>,
    pub zeros: Vec<f64>,
    pub immersed: Vec<ImmersedPointReport>,
}

/// Π_{j<d} (ξ − j), scaled by a.
pub fn default_polynomial(d: usize, a: f64) -> Polynomial {
    let roots: Vec<f64> = (0..d).map(|j| j as f64).collect();
    Polynomial::from_roots(&roots, a)
}

/// R = max(2 R_0, 1.05 × zero threshold), doubled until the zero count holds across the gluing band.
pub fn choose_radius(model: &HyperellipticModel, eps: f64, request: Option<f64>) -> Result<f64> {
    let mut r = request.unwrap_or_else(|| (2.0 * model.r0).max(1.05 * model.zero_threshold()));
    if r - eps <= model.r0 && request.is_some() {
        return Err(Error::InvalidData(format!("R - eps = {} must exceed R_0 = {}", r - eps, model.r0)));
    }
    for _ in 0..20 {
        if [r - eps, r, r + eps, r + 1.0].iter().all(|&x| find_zeros(model, x).is_ok()) {
            return Ok(r);
        }
        if request.is_some() {
            break;
        }
        r *= 2.0;
    }
    let found = find_zeros(model, r - eps).map(|z| z.len()).unwrap_or(0);
    Err(Error::WrongZeroCount { r: r - eps, expected: model.d + 2, found })
}

/// Build the glued potential for degree-2 data.
pub fn build_glued(ts: &TropicalMultiSection, rep: &GenericityReport, d: usize, ov: &Overrides) -> Result<(GluedPotential, Parameters)> {
    let f = match &ov.polynomial {
        Some(c) => Polynomial::new(c.clone()),
        None => default_polynomial(d, 1.0),
    };
    if f.degree() != d {
        return Err(Error::InadmissiblePolynomial(format!("expected degree {d}, got {}", f.degree())));
    }
    let f = match ov.a_d_initial {
        Some(a) if !(a > 0.0) => return Err(Error::InadmissiblePolynomial("a_d_initial must be positive".into())),
        Some(a) if f.leading() > 0.0 => f.scaled(a / f.leading()),
        _ => f,
    };
    let a0 = f.leading();
    let order = ov.series_order.unwrap_or(DEFAULT_ORDER);
    let model = series_coefficients_rank(&f, ts.degree, order)?;
    let eps = ov.eps.unwrap_or(DEFAULT_EPS);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidData(format!("eps = {eps} must lie in (0, 1)")));
    }
    let big_r = choose_radius(&model, eps, ov.big_r)?;
    let arcs = circle_restriction(ts)?;
    let outer = smooth_outer(&arcs, big_r, None)?;
    let rho = build_rho(&rep.crossing_thetas(), &model, big_r, eps)?;
    let gp = glue(&outer, &model, &rho, a0)?;
    let params = Parameters {
        big_r,
        eps,
        series_order: order,
        resolution: ov.resolution.unwrap_or(DEFAULT_RESOLUTION),
        a_d: gp.a_d,
        delta: outer.delta,
        m_delta: outer.m_delta,
        halvings: gp.halvings,
        flip: gp.flip,
    };
    Ok((gp, params))
}

/// The full pipeline. Refusals (non-generic or non-realizable data) come back
/// as a realization without a glued potential.
pub fn realize(ts: &TropicalMultiSection, ov: &Overrides) -> Result<Realization> {
    let rep = genericity_count(ts);
    let verdict = realizability_from_report(&rep, DEFAULT_D_MAX_FACTOR * ts.degree as u32);
    let mut out = Realization {
        genericity: rep.clone(),
        verdict: verdict.clone(),
        glued: None,
        parameters: None,
        certificate: None,
        zeros: vec![],
        immersed: vec![],
    };
    let d = match (verdict.status, verdict.d) {
        (Realizability::Realizable, Some(d)) => d as usize,
        _ => return Ok(out),
    };
    if ts.degree != 2 {
        return Err(Error::UnsupportedDegree(ts.degree));
    }
    let (gp, params) = build_glued(ts, &rep, d, ov)?;
    out.certificate = Some(verify_embedding(&gp, params.resolution)?);
    out.zeros = find_zeros(&gp.inner, params.big_r + params.eps)?;
    out.immersed = immersed_points(&gp.inner);
    out.glued = Some(gp);
    out.parameters = Some(params);
    Ok(out)
}
