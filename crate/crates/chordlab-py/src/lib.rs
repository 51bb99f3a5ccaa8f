//! Python bindings. Rationals cross the boundary as strings ("-5/2").

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use chordlab::asymptotics as asy;
use chordlab::bell;
use chordlab::bijections::{self as bij, RootShareTriple, Seed, ZTree};
use chordlab::chord::{count_classes, ChordDiagram};
use chordlab::diffeo::{self as dif, Diffeomorphism};
use chordlab::fps::Q;
use chordlab::gfseries::{self as gf, SeriesName, MAX_VERIFY_ORDER};
use chordlab::yukawa::{self as yuk, TadpoleGraph};

type R<T> = Result<T, String>;

fn s<E: ToString>(e: E) -> String {
    e.to_string()
}

fn rationals(xs: &[String]) -> R<Vec<Q>> {
    xs.iter()
        .map(|t| Q::from_str(t.trim()).map_err(|_| format!("bad rational {t:?}")))
        .collect()
}

fn strings(qs: &[Q]) -> Vec<String> {
    qs.iter().map(ToString::to_string).collect()
}

fn chord(lit: &str) -> R<ChordDiagram> {
    lit.parse().map_err(s)
}

pub fn series_coeffs(name: &str, order: usize) -> R<Vec<String>> {
    let sn: SeriesName = name.parse().map_err(s)?;
    if order > MAX_VERIFY_ORDER {
        return Err(format!("order {order} exceeds {MAX_VERIFY_ORDER}"));
    }
    Ok(strings(gf::series(sn, order).coeffs()))
}

pub fn class_counts(n: usize) -> R<BTreeMap<String, u64>> {
    let c = count_classes(n).map_err(s)?;
    Ok([
        ("total", c.total),
        ("connected", c.connected),
        ("two_connected", c.two_connected),
        ("connectivity_one", c.connectivity_one),
        ("indecomposable", c.indecomposable),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect())
}

pub fn nabla_triple(lit: &str) -> R<(String, String, usize)> {
    let t = bij::nabla(&chord(lit)?).map_err(s)?;
    Ok((t.c1.to_string(), t.c2.to_string(), t.k))
}

pub fn nabla_inverse(c1: &str, c2: &str, k: usize) -> R<String> {
    let t = RootShareTriple { c1: chord(c1)?, c2: chord(c2)?, k };
    Ok(bij::nabla_inv(&t).map_err(s)?.to_string())
}

pub fn alien(model: &str, order: usize) -> R<(Vec<String>, String)> {
    let img = match model {
        "C" => asy::alien_c(order),
        "C2" | "C>=2" => asy::alien_c2(order),
        other => return Err(format!("unknown model {other:?}")),
    }
    .map_err(s)?;
    Ok((strings(img.body.coeffs()), img.exp_offset.to_string()))
}

pub fn b_values(a: &[String], n: usize) -> R<Vec<String>> {
    let d = Diffeomorphism::new(rationals(a)?).map_err(s)?;
    Ok(strings(&dif::b_inverse_all(&d, n).map_err(s)?[1..]))
}

pub fn b_closed(a: &[String], n: usize) -> R<Vec<String>> {
    let d = Diffeomorphism::new(rationals(a)?).map_err(s)?;
    Ok((1..=n).map(|m| dif::b_closed_form(&d, m).to_string()).collect())
}

fn py_err(e: String) -> PyErr {
    PyValueError::new_err(e)
}

/// Coefficients of a named series as exact rational strings.
#[pyfunction]
fn series(name: &str, order: usize) -> PyResult<Vec<String>> {
    series_coeffs(name, order).map_err(py_err)
}

/// Brute-force class counts over all diagrams on `n` chords.
#[pyfunction]
fn counts(n: usize) -> PyResult<BTreeMap<String, u64>> {
    class_counts(n).map_err(py_err)
}

#[pyfunction]
fn connectivity(diagram: &str) -> PyResult<usize> {
    Ok(chord(diagram).map_err(py_err)?.connectivity())
}

#[pyfunction]
fn phi(diagram: &str) -> PyResult<String> {
    bij::phi(&chord(diagram).map_err(py_err)?).map(|d| d.to_string()).map_err(|e| py_err(s(e)))
}

#[pyfunction]
fn phi_inv(diagram: &str) -> PyResult<String> {
    bij::phi_inv(&chord(diagram).map_err(py_err)?).map(|d| d.to_string()).map_err(|e| py_err(s(e)))
}

#[pyfunction]
fn nabla(diagram: &str) -> PyResult<(String, String, usize)> {
    nabla_triple(diagram).map_err(py_err)
}

#[pyfunction]
fn nabla_inv(c1: &str, c2: &str, k: usize) -> PyResult<String> {
    nabla_inverse(c1, c2, k).map_err(py_err)
}

#[pyfunction]
fn theta(seed: &str) -> PyResult<String> {
    let sd: Seed = seed.parse().map_err(|e| py_err(s(e)))?;
    Ok(bij::theta(&sd).to_string())
}

#[pyfunction]
fn theta_inv(tree: &str) -> PyResult<String> {
    let t: ZTree = tree.parse().map_err(|e| py_err(s(e)))?;
    bij::theta_inv(&t).map(|x| x.to_string()).map_err(|e| py_err(s(e)))
}

#[pyfunction]
fn tadpoles(loops: usize) -> PyResult<Vec<String>> {
    let t = yuk::enumerate_tadpoles(loops, false).map_err(|e| py_err(s(e)))?;
    Ok(t.iter().map(ToString::to_string).collect())
}

#[pyfunction]
fn lambda_bij(tadpole: &str) -> PyResult<String> {
    let t: TadpoleGraph = tadpole.parse().map_err(|e| py_err(s(e)))?;
    yuk::lambda_bij(&t).map(|c| c.to_string()).map_err(|e| py_err(s(e)))
}

#[pyfunction]
fn lambda_inv(diagram: &str) -> PyResult<String> {
    yuk::lambda_inv(&chord(diagram).map_err(py_err)?).map(|t| t.to_string()).map_err(|e| py_err(s(e)))
}

/// `B_{n,k}(x_1, x_2, ...)`.
#[pyfunction]
fn bell_partial(n: usize, k: usize, xs: Vec<String>) -> PyResult<String> {
    let xs = rationals(&xs).map_err(py_err)?;
    bell::bell_partial(n, k, &xs).map(|v| v.to_string()).map_err(|e| py_err(s(e)))
}

/// Body coefficients and exponential offset of the alien-derivative image.
#[pyfunction]
fn alien_image(model: &str, order: usize) -> PyResult<(Vec<String>, String)> {
    alien(model, order).map_err(py_err)
}

/// Ratio of the scaled remainder to the predicted next coefficient.
#[pyfunction]
fn fit_ratio(model: &str, n: usize, terms: usize) -> PyResult<f64> {
    asy::asymptotic_fit(model, n, terms).map(|f| f.ratio()).map_err(|e| py_err(s(e)))
}

/// `b_1..b_n` from the compositional inverse.
#[pyfunction]
fn b_inverse(a: Vec<String>, n: usize) -> PyResult<Vec<String>> {
    b_values(&a, n).map_err(py_err)
}

#[pyfunction]
fn b_closed_form(a: Vec<String>, n: usize) -> PyResult<Vec<String>> {
    b_closed(&a, n).map_err(py_err)
}

#[pyfunction]
fn verify_identity(name: &str, order: usize) -> PyResult<bool> {
    gf::verify_identity(name, order).map(|r| r.holds).map_err(|e| py_err(s(e)))
}

#[pymodule]
fn chordlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(series, m)?)?;
    m.add_function(wrap_pyfunction!(counts, m)?)?;
    m.add_function(wrap_pyfunction!(connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(phi_inv, m)?)?;
    m.add_function(wrap_pyfunction!(nabla, m)?)?;
    m.add_function(wrap_pyfunction!(nabla_inv, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta_inv, m)?)?;
    m.add_function(wrap_pyfunction!(tadpoles, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_bij, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_inv, m)?)?;
    m.add_function(wrap_pyfunction!(bell_partial, m)?)?;
    m.add_function(wrap_pyfunction!(alien_image, m)?)?;
    m.add_function(wrap_pyfunction!(fit_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(b_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(b_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    Ok(())
}
