//! Python bindings: series-level operators, dominants, and the claim runners.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use starlab_core::dominants::{best_dominant_q, rho_limit, DominantSpec};
use starlab_core::genfun::{koebe_lambda, random_sn_member};
use starlab_core::integral_ops::{apply_jm, Family, OperatorParams};
use starlab_core::report::{self, Settings};
use starlab_core::series::{NormalizedFunction, TruncatedSeries};
use starlab_core::StarlabError;

fn err(e: StarlabError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(index: u8) -> PyResult<Family> {
    match index {
        1 => Ok(Family::Logarithmic),
        2 => Ok(Family::Binomial),
        _ => Err(PyValueError::new_err(format!("family must be 1 or 2, got {index}"))),
    }
}

/// Taylor coefficients `[0, 1, a_2, ...]` of the order-`lambda` Koebe function.
#[pyfunction]
#[pyo3(signature = (lam, order = 64))]
fn koebe(lam: f64, order: usize) -> PyResult<Vec<Complex64>> {
    Ok(koebe_lambda(lam, order).map_err(err)?.series().coeffs().to_vec())
}

/// Seeded member of `S_n(lambda)`.
#[pyfunction]
#[pyo3(signature = (seed, lam, n, order = 64))]
fn random_member(seed: u64, lam: f64, n: u32, order: usize) -> PyResult<Vec<Complex64>> {
    Ok(random_sn_member(seed, lam, n, order)
        .map_err(err)?
        .series()
        .coeffs()
        .to_vec())
}

/// Coefficients of `J_m(f)` for `f` given by its coefficients (`a_0 = 0`, `a_1 = 1`).
#[pyfunction]
#[pyo3(signature = (coeffs, alpha, beta, gamma = Complex64::new(0.0, 0.0), m = 1, family_index = 1))]
fn apply_operator(
    coeffs: Vec<Complex64>,
    alpha: f64,
    beta: f64,
    gamma: Complex64,
    m: u32,
    family_index: u8,
) -> PyResult<Vec<Complex64>> {
    let f = NormalizedFunction::new(TruncatedSeries::new(coeffs).map_err(err)?).map_err(err)?;
    let p = OperatorParams::new(alpha, beta, gamma, m, family(family_index)?).map_err(err)?;
    Ok(apply_jm(&f, &p).map_err(err)?.series().coeffs().to_vec())
}

/// Best dominant `q(z)` for the given `mu` and `lambda0`.
#[pyfunction]
fn best_dominant(mu: f64, lambda0: f64, z: Complex64) -> PyResult<Complex64> {
    best_dominant_q(DominantSpec::new(mu, lambda0).map_err(err)?, z).map_err(err)
}

/// `lim_{r -> 1} -Re q(-r)` at `lambda0 = 0`.
#[pyfunction]
fn rho(mu: f64) -> PyResult<f64> {
    Ok(rho_limit(DominantSpec::new(mu, 0.0).map_err(err)?).map_err(err)?.value)
}

/// Runs a claim (`structural`, `theorem1`, `theorem2`, `corollaries`, `sequences`)
/// and returns the JSON reports.
#[pyfunction]
#[pyo3(signature = (command, order = 512, seed = 42, n_max = None))]
fn run(command: &str, order: usize, seed: u64, n_max: Option<u32>) -> PyResult<String> {
    let s = Settings {
        order,
        seed,
        ..Settings::default()
    };
    let lambdas = [0.0, 0.3];
    let reports = match command {
        "structural" => vec![report::cmd_structural(&s)],
        "theorem1" => vec![report::cmd_theorem1(&s, &lambdas, n_max.unwrap_or(2))],
        "theorem2" => vec![report::cmd_theorem2(&s, &lambdas, n_max.unwrap_or(2))],
        "corollaries" => vec![report::cmd_corollaries(&s)],
        "sequences" => vec![report::cmd_sequences(&s, n_max.unwrap_or(4))],
        _ => return Err(PyValueError::new_err(format!("unknown command {command}"))),
    };
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>().map_err(err)?;
    Ok(report::to_json(&reports))
}

#[pymodule]
fn starlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(koebe, m)?)?;
    m.add_function(wrap_pyfunction!(random_member, m)?)?;
    m.add_function(wrap_pyfunction!(apply_operator, m)?)?;
    m.add_function(wrap_pyfunction!(best_dominant, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
