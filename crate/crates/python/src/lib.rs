//! Python bindings. Documents go in and come out as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use troplag_core::bundle::{mirror_summary as summary, KaneyamaBundle};
use troplag_core::io::{parse_input, render_svg, response, run_doc, CommandRequest, Style, Subcommand, Subject};
use troplag_core::realization::model::series_coefficients;
use troplag_core::realization::pipeline::Overrides;
use troplag_core::realization::poly::Polynomial;
use troplag_core::realization::zeros::find_zeros as zeros;
use troplag_core::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn subcommand(name: &str) -> PyResult<Subcommand> {
    Ok(match name {
        "validate" => Subcommand::Validate,
        "genericity" => Subcommand::Genericity,
        "realize" => Subcommand::Realize,
        "verify" => Subcommand::Verify,
        "bundle" => Subcommand::Bundle,
        "plot" => Subcommand::Plot,
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    })
}

/// Run a command on a JSON document; returns (exit code, JSON or SVG).
#[pyfunction]
#[pyo3(signature = (command, document, resolution=None, series_order=None, big_r=None, eps=None))]
fn run(
    command: &str,
    document: &str,
    resolution: Option<usize>,
    series_order: Option<usize>,
    big_r: Option<f64>,
    eps: Option<f64>,
) -> PyResult<(i32, String)> {
    let req = CommandRequest {
        subcommand: subcommand(command)?,
        input: "<python>".into(),
        output: None,
        overrides: Overrides { big_r, eps, series_order, resolution, ..Default::default() },
    };
    let doc = parse_input(document).map_err(err)?;
    let out = run_doc(&req, &doc).map_err(err)?;
    Ok((out.code, out.output))
}

/// Mirror summary of E_{a,b,c}(k0 D0 + k1 D1 + k2 D2), as JSON.
#[pyfunction]
#[pyo3(signature = (a, b, c, twist=[0, 0, 0], dual=false))]
fn mirror_summary(a: u32, b: u32, c: u32, twist: [i64; 3], dual: bool) -> PyResult<String> {
    let kb = KaneyamaBundle { a, b, c, twist, dual };
    response("bundle", summary(&kb).map_err(err)?).map_err(err)
}

/// Angular zeros of the local potential of x² = f at radius r; `coeffs` from the constant term up.
#[pyfunction]
#[pyo3(signature = (coeffs, r, series_order=40))]
fn find_zeros(coeffs: Vec<f64>, r: f64, series_order: usize) -> PyResult<Vec<f64>> {
    let model = series_coefficients(&Polynomial::new(coeffs), series_order).map_err(err)?;
    zeros(&model, r).map_err(err)
}

/// SVG of the fan or tropical data in a document.
#[pyfunction]
fn render(document: &str) -> PyResult<String> {
    let doc = parse_input(document).map_err(err)?;
    let style = Style::default();
    if doc.multisection.is_some() {
        let ts = doc.multisection().map_err(err)?;
        let rep = troplag_core::multisection::genericity_count(&ts);
        render_svg(&Subject::MultiSection(&ts, Some(&rep)), &style).map_err(err)
    } else {
        let fan = doc.fan().map_err(err)?;
        render_svg(&Subject::Fan(&fan), &style).map_err(err)
    }
}

#[pymodule]
fn troplag(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_summary, m)?)?;
    m.add_function(wrap_pyfunction!(find_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add("SCHEMA", troplag_core::io::SCHEMA)?;
    Ok(())
}
