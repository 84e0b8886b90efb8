//! Deterministic SVG drawings of fans, tropical data and point clouds.

use std::f64::consts::TAU;
use std::fmt::Write;

use super::round_sig;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::multisection::{GenericityReport, TropicalMultiSection};
use crate::realization::cloud::PointCloud;

pub enum Subject<'a> {
    Fan(&'a Fan),
    /// Tropical data with the crossings of its genericity report.
    MultiSection(&'a TropicalMultiSection, Option<&'a GenericityReport>),
    /// A sampled Lagrangian with branch points and immersed points in the ξ-plane.
    Cloud { cloud: &'a PointCloud, branch: &'a [[f64; 2]], immersed: &'a [[f64; 2]] },
}

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub size: u32,
    /// At most this many cloud points are drawn; the rest are skipped by stride.
    pub max_points: usize,
}

impl Default for Style {
    fn default() -> Self {
        Style { size: 480, max_points: 20_000 }
    }
}

const SHEET_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn n(v: f64) -> String {
    round_sig(v, 6).to_string()
}

fn header(out: &mut String, size: u32) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
}

fn fan_layer(out: &mut String, fan: &Fan, size: f64, labels: impl Fn(usize) -> Option<String>) {
    let c = size / 2.0;
    let len = 0.42 * size;
    let _ = writeln!(out, r#"<g class="rays" stroke="black" stroke-width="1.5">"#);
    for (i, v) in fan.rays().iter().enumerate() {
        let a = v.angle();
        let _ = writeln!(
            out,
            r#"<line class="ray" data-ray="{i}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            n(c),
            n(c),
            n(c + len * a.cos()),
            n(c - len * a.sin())
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g class="cones" font-family="monospace" font-size="11" text-anchor="middle">"#);
    let k = fan.n_rays();
    for i in 0..k {
        let a0 = fan.ray(i).angle();
        let mut a1 = fan.ray((i + 1) % k).angle();
        if a1 <= a0 {
            a1 += TAU;
        }
        let mid = 0.5 * (a0 + a1);
        let (x, y) = (c + 0.3 * size * mid.cos(), c - 0.3 * size * mid.sin());
        let _ = writeln!(out, r#"<text class="cone-label" x="{}" y="{}">σ{i}</text>"#, n(x), n(y));
        if let Some(text) = labels(i) {
            let _ = writeln!(out, r#"<text class="lift-label" x="{}" y="{}">{text}</text>"#, n(x), n(y + 13.0));
        }
    }
    let _ = writeln!(out, "</g>");
}

pub fn render_svg(subject: &Subject, style: &Style) -> Result<String> {
    let size = style.size as f64;
    let mut out = String::new();
    match subject {
        Subject::Fan(fan) => {
            if fan.n_rays() == 0 {
                return Err(Error::EmptySubject);
            }
            header(&mut out, style.size);
            fan_layer(&mut out, fan, size, |_| None);
        }
        Subject::MultiSection(ts, rep) => {
            if ts.lifts.is_empty() {
                return Err(Error::EmptySubject);
            }
            header(&mut out, style.size);
            fan_layer(&mut out, &ts.fan, size, |cone| {
                let mut lifts: Vec<_> = ts.lifts_over(cone).collect();
                lifts.sort_by_key(|l| l.sheet);
                let s: Vec<String> = lifts.iter().map(|l| format!("{}:({},{})", l.sheet, l.slope.x, l.slope.y)).collect();
                Some(s.join(" "))
            });
            if let Some(rep) = rep {
                let c = size / 2.0;
                let rad = 0.36 * size;
                let _ = writeln!(out, r#"<g class="crossings" fill="orange" stroke="black">"#);
                let mut crossings: Vec<_> = rep.crossings.iter().collect();
                crossings.sort_by(|a, b| a.psi.total_cmp(&b.psi));
                for x in crossings {
                    let _ = writeln!(
                        out,
                        r#"<circle class="crossing" data-pair="{}-{}" cx="{}" cy="{}" r="5"/>"#,
                        x.pair.0,
                        x.pair.1,
                        n(c + rad * x.psi.cos()),
                        n(c - rad * x.psi.sin())
                    );
                }
                let _ = writeln!(out, "</g>");
            }
        }
        Subject::Cloud { cloud, branch, immersed } => {
            if cloud.points.is_empty() {
                return Err(Error::EmptySubject);
            }
            let ext = cloud
                .points
                .iter()
                .map(|p| p.xi[0].abs().max(p.xi[1].abs()))
                .chain(branch.iter().chain(immersed.iter()).map(|p| p[0].abs().max(p[1].abs())))
                .fold(0.0f64, f64::max)
                .max(f64::MIN_POSITIVE);
            let scale = 0.45 * size / ext;
            let c = size / 2.0;
            let map = |p: [f64; 2]| (c + scale * p[0], c - scale * p[1]);
            header(&mut out, style.size);
            let stride = cloud.points.len().div_ceil(style.max_points.max(1));
            for s in 0..cloud.sheets.max(2) {
                let color = SHEET_COLORS[s % SHEET_COLORS.len()];
                let _ = writeln!(out, r#"<g class="sheet" data-sheet="{s}" fill="{color}" fill-opacity="0.5">"#);
                for p in cloud.points.iter().step_by(stride).filter(|p| p.sheet == s) {
                    let (x, y) = map(p.xi);
                    let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="0.8"/>"#, n(x), n(y));
                }
                let _ = writeln!(out, "</g>");
            }
            let _ = writeln!(out, r#"<g class="markers" stroke="black">"#);
            for p in branch.iter() {
                let (x, y) = map(*p);
                let _ = writeln!(out, r#"<circle class="branch" cx="{}" cy="{}" r="4" fill="white"/>"#, n(x), n(y));
            }
            for p in immersed.iter() {
                let (x, y) = map(*p);
                let _ = writeln!(
                    out,
                    r#"<rect class="immersed" x="{}" y="{}" width="8" height="8" fill="black"/>"#,
                    n(x - 4.0),
                    n(y - 4.0)
                );
            }
            let _ = writeln!(out, "</g>");
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
