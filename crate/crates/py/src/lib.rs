//! Python bindings: run any hochkit command and get its JSON report back.

use clap::Parser;
use hochkit::algebra::{Bimodule, Hochschild};
use hochkit::cli::{self, Cli};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

/// Run a command given its arguments (without the program name).
/// Returns `(exit_code, report_json)`.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(i32, String)> {
    let cli = Cli::try_parse_from(std::iter::once("hochkit".to_string()).chain(args))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let rep = cli::run(&cli.command, cli.cap);
    Ok((rep.exit_code(), rep.to_json()))
}

/// Hochschild cohomology dimensions of an algebra given as JSON text.
#[pyfunction]
#[pyo3(signature = (algebra_json, max_degree = 3))]
fn hh_dims(algebra_json: &str, max_degree: usize) -> PyResult<Vec<usize>> {
    let err = |e: hochkit::error::Error| PyValueError::new_err(e.to_string());
    let a = hochkit::io::parse_algebra(algebra_json).map_err(err)?;
    let m = Bimodule::diagonal(&a);
    let hh = Hochschild::new(&a, &m).cohomology(max_degree).map_err(err)?;
    Ok(hh.iter().map(|h| h.dim).collect())
}

#[pymodule]
fn pyhochkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(hh_dims, m)?)?;
    Ok(())
}
