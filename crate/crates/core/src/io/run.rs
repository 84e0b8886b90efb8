//! The command runner behind the CLI.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use super::doc::{parse_input, response, FanDoc, GluedDoc, InputDoc, MultiSectionDoc};
use super::svg::{render_svg, Style, Subject};
use crate::bundle::{kaneyama_tropicalize, mirror_summary, rigidity_invert, RigidityOutcome};
use crate::error::{Error, Result};
use crate::multisection::{genericity_count, validate, Realizability};
use crate::realization::certify::{verify_embedding, Verdict};
use crate::realization::cloud::sample_lagrangian;
use crate::realization::pipeline::{build_glued, realize, Overrides};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Validate,
    Genericity,
    Realize,
    Verify,
    Bundle,
    Plot,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Validate => "validate",
            Subcommand::Genericity => "genericity",
            Subcommand::Realize => "realize",
            Subcommand::Verify => "verify",
            Subcommand::Bundle => "bundle",
            Subcommand::Plot => "plot",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandRequest {
    pub subcommand: Subcommand,
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    /// Take precedence over the document's own overrides.
    pub overrides: Overrides,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    /// JSON response or SVG document.
    pub output: String,
    /// One line for standard error, if any.
    pub message: Option<String>,
}

fn merge(base: Option<&Overrides>, top: &Overrides) -> Overrides {
    let b = base.cloned().unwrap_or_default();
    Overrides {
        big_r: top.big_r.or(b.big_r),
        eps: top.eps.or(b.eps),
        series_order: top.series_order.or(b.series_order),
        resolution: top.resolution.or(b.resolution),
        a_d_initial: top.a_d_initial.or(b.a_d_initial),
        polynomial: top.polynomial.clone().or(b.polynomial),
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::Violated => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn ok(command: Subcommand, code: i32, body: impl Serialize) -> Result<Outcome> {
    Ok(Outcome { code, output: response(command.name(), body)?, message: None })
}

/// Execute one request against an already loaded document.
pub fn run_doc(req: &CommandRequest, doc: &InputDoc) -> Result<Outcome> {
    let cmd = req.subcommand;
    match cmd {
        Subcommand::Validate => {
            let ts = doc.multisection()?;
            let rep = validate(&ts);
            let code = if rep.valid { EXIT_OK } else { EXIT_FAIL };
            ok(cmd, code, rep)
        }
        Subcommand::Genericity => {
            let ts = doc.multisection()?;
            let rep = genericity_count(&ts);
            let code = if rep.succeeded() { EXIT_OK } else { EXIT_FAIL };
            ok(cmd, code, rep)
        }
        Subcommand::Realize => realize_doc(req, doc),
        Subcommand::Verify => verify_doc(req, doc),
        Subcommand::Bundle => bundle_doc(doc),
        Subcommand::Plot => plot_doc(req, doc),
    }
}

fn realize_doc(req: &CommandRequest, doc: &InputDoc) -> Result<Outcome> {
    let cmd = req.subcommand;
    let ts = doc.multisection()?;
    let ov = merge(doc.overrides.as_ref(), &req.overrides);
    let out = realize(&ts, &ov)?;
    let (Some(params), Some(cert), Some(gp)) = (&out.parameters, &out.certificate, &out.glued) else {
        let status = out.verdict.status;
        let code = if status == Realizability::NotRealizable { EXIT_FAIL } else { EXIT_INCONCLUSIVE };
        let message = format!("refused: {}", out.verdict.reason);
        let body = json!({
            "genericity": out.genericity,
            "verdict": out.verdict,
            "refusal": out.verdict.reason,
        });
        return Ok(Outcome { code, output: response(cmd.name(), body)?, message: Some(message) });
    };
    // The polynomial before shrinking, so that a rebuild repeats the same halvings.
    let initial = gp.inner.poly.scaled(1.0 / 0.5f64.powi(params.halvings as i32));
    let glued = GluedDoc {
        fan: FanDoc::of(&ts.fan),
        multisection: MultiSectionDoc::of(&ts),
        overrides: Overrides {
            big_r: Some(params.big_r),
            eps: Some(params.eps),
            series_order: Some(params.series_order),
            resolution: Some(params.resolution),
            a_d_initial: None,
            polynomial: Some(initial.coeffs.clone()),
        },
    };
    let body = json!({
        "genericity": out.genericity,
        "verdict": out.verdict,
        "parameters": params,
        "certificate": cert,
        "zeros": out.zeros,
        "immersed": out.immersed,
        "glued": glued,
    });
    let code = verdict_code(cert.verdict);
    let message = (code != EXIT_OK).then(|| format!("embeddedness certificate: {:?}", cert.verdict));
    Ok(Outcome { code, output: response(cmd.name(), body)?, message })
}

/// Rebuild a stored glued potential and certify it again, by default at
/// twice its stored resolution.
fn verify_doc(req: &CommandRequest, doc: &InputDoc) -> Result<Outcome> {
    let g = doc.glued.as_ref().ok_or_else(|| Error::Parse("missing key \"glued\"".into()))?;
    let fan = g.fan.build()?;
    let ts = g.multisection.build(&fan)?;
    let rep = genericity_count(&ts);
    let verdict = crate::multisection::realizability(&ts);
    let d = verdict.d.ok_or_else(|| Error::NotRealizable(rep.n.unwrap_or(0)))? as usize;
    let ov = merge(Some(&g.overrides), &Overrides { resolution: None, ..req.overrides.clone() });
    let (gp, params) = build_glued(&ts, &rep, d, &ov)?;
    let resolution = req.overrides.resolution.unwrap_or(2 * params.resolution);
    let cert = verify_embedding(&gp, resolution)?;
    let code = verdict_code(cert.verdict);
    let message = (code != EXIT_OK).then(|| format!("embeddedness certificate: {:?}", cert.verdict));
    let body = json!({ "parameters": params, "certificate": cert });
    Ok(Outcome { code, output: response(Subcommand::Verify.name(), body)?, message })
}

fn bundle_doc(doc: &InputDoc) -> Result<Outcome> {
    let cmd = Subcommand::Bundle;
    if let Some(kb) = &doc.bundle {
        let summary = mirror_summary(kb)?;
        let ts = kaneyama_tropicalize(kb)?;
        let body = json!({ "summary": summary, "multisection": MultiSectionDoc::of(&ts), "fan": FanDoc::of(&ts.fan) });
        return ok(cmd, EXIT_OK, body);
    }
    let ts = doc.multisection()?;
    match rigidity_invert(&ts)? {
        RigidityOutcome::Match(m) => ok(cmd, EXIT_OK, json!({ "rigidity": RigidityOutcome::Match(m) })),
        RigidityOutcome::NotInFamily => Ok(Outcome {
            code: EXIT_FAIL,
            output: response(cmd.name(), json!({ "rigidity": RigidityOutcome::NotInFamily }))?,
            message: Some("tropical data are not in the Kaneyama family".into()),
        }),
    }
}

/// Plot a realization response as a point cloud, tropical data as a
/// diagram, or a bare fan.
fn plot_doc(req: &CommandRequest, doc: &InputDoc) -> Result<Outcome> {
    let style = Style::default();
    let svg = if let Some(g) = &doc.glued {
        let fan = g.fan.build()?;
        let ts = g.multisection.build(&fan)?;
        let rep = genericity_count(&ts);
        let d = crate::multisection::realizability(&ts).d.ok_or_else(|| Error::NotRealizable(rep.n.unwrap_or(0)))?;
        let (gp, _) = build_glued(&ts, &rep, d as usize, &merge(Some(&g.overrides), &req.overrides))?;
        let res = req.overrides.resolution.unwrap_or(200);
        let cloud = sample_lagrangian(&gp, 2.0 * (gp.big_r + 1.0), res, res)?;
        let mut branch = Vec::new();
        let mut immersed = Vec::new();
        for c in &gp.inner.clusters {
            let p = [c.root.re, c.root.im];
            if c.multiplicity == 1 {
                branch.push(p);
            } else {
                immersed.push(p);
            }
        }
        render_svg(&Subject::Cloud { cloud: &cloud, branch: &branch, immersed: &immersed }, &style)?
    } else if doc.multisection.is_some() {
        let ts = doc.multisection()?;
        let rep = genericity_count(&ts);
        render_svg(&Subject::MultiSection(&ts, Some(&rep)), &style)?
    } else {
        let fan = doc.fan()?;
        render_svg(&Subject::Fan(&fan), &style)?
    };
    Ok(Outcome { code: EXIT_OK, output: svg, message: None })
}

/// Read the input file and execute the request. Parse and IO failures and
/// errors from the library come back with exit code 1.
pub fn run(req: &CommandRequest) -> Outcome {
    let fail = |e: Error| Outcome {
        code: EXIT_ERROR,
        output: String::new(),
        message: Some(format!("{}: {e}", req.input.display())),
    };
    let text = match std::fs::read_to_string(&req.input) {
        Ok(t) => t,
        Err(e) => return fail(e.into()),
    };
    match parse_input(&text).and_then(|doc| run_doc(req, &doc)) {
        Ok(o) => o,
        Err(e) => fail(e),
    }
}
