//! Documents, rendering and the command runner.

pub mod doc;
pub mod run;
pub mod svg;

pub use doc::{parse_input, response, InputDoc, SCHEMA};
pub use run::{run, run_doc, CommandRequest, Outcome, Subcommand};
pub use svg::{render_svg, Style, Subject};

/// Round to `digits` significant digits.
pub fn round_sig(v: f64, digits: i32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let mag = v.abs().log10().floor() as i32;
    let p = digits - 1 - mag;
    let out = if p >= 0 {
        let s = 10f64.powi(p);
        (v * s).round() / s
    } else {
        let s = 10f64.powi(-p);
        (v / s).round() * s
    };
    if out == 0.0 { 0.0 } else { out }
}
