//! Python bindings for the split-G2 holonomy toolkit: expression parsing
//! and differentiation, jet evaluation, Berger verdicts, and the holonomy
//! certification battery. JSON-shaped results come back as dicts.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyAny, PyDict};

use g2hol::berger::berger_verdict;
use g2hol::coframe::{build_case, builtin_examples, slot_specs, CaseId};
use g2hol::expr;
use g2hol::holonomy::{certify_built, CertifyConfig};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn case_of(name: &str) -> PyResult<CaseId> {
    CaseId::parse(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown case `{name}` (expected 1a..2d)")))
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
    fn conv(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
        Ok(match v {
            serde_json::Value::Null => py.None(),
            serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().unbind().into(),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    i.into_pyobject(py)?.unbind().into()
                } else {
                    n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.unbind().into()
                }
            }
            serde_json::Value::String(s) => s.into_pyobject(py)?.unbind().into(),
            serde_json::Value::Array(items) => {
                let list = pyo3::types::PyList::empty(py);
                for item in items {
                    list.append(conv(py, item)?)?;
                }
                list.unbind().into()
            }
            serde_json::Value::Object(map) => {
                let dict = PyDict::new(py);
                for (k, val) in map {
                    dict.set_item(k, conv(py, val)?)?;
                }
                dict.unbind().into()
            }
        })
    }
    conv(py, &value)
}

/// Parse an expression in x1..x7 and return its canonical printed form.
#[pyfunction]
fn parse(src: &str) -> PyResult<String> {
    Ok(expr::parse(src).map_err(value_err)?.to_string())
}

/// Symbolic partial derivative d(src)/dx_var, canonical printed form.
#[pyfunction]
fn diff(src: &str, var: u8) -> PyResult<String> {
    if !(1..=7).contains(&var) {
        return Err(PyValueError::new_err("var must be 1..=7"));
    }
    let e = expr::parse(src).map_err(value_err)?;
    Ok(expr::diff(&e, var).to_string())
}

/// Evaluate an expression at a point (7 coordinates).
#[pyfunction]
fn eval(src: &str, point: [f64; 7]) -> PyResult<f64> {
    let e = expr::parse(src).map_err(value_err)?;
    expr::eval(&e, &point).map_err(value_err)
}

/// Taylor coefficients through the given order at a point, as a list of
/// (multi_index, coefficient) pairs.
#[pyfunction]
fn eval_jet(src: &str, point: [f64; 7], order: usize) -> PyResult<Vec<([u8; 7], f64)>> {
    if order > g2hol::jet::MAX_ORDER {
        return Err(PyValueError::new_err("order must be ≤ 4"));
    }
    let e = expr::parse(src).map_err(value_err)?;
    let jet = expr::eval_jet(&e, &point, order).map_err(value_err)?;
    Ok(g2hol::jet::multi_indices(order)
        .iter()
        .map(|alpha| (*alpha, jet.coeff(alpha)))
        .collect())
}

/// The eight case names.
#[pyfunction]
fn cases() -> Vec<String> {
    CaseId::all().iter().map(|c| c.as_str().to_string()).collect()
}

/// Slot names and allowed variables for a case.
#[pyfunction]
fn case_slots(case: &str) -> PyResult<BTreeMap<String, Vec<u8>>> {
    let id = case_of(case)?;
    Ok(slot_specs(id)
        .iter()
        .map(|s| (s.name.to_string(), s.allowed_vars.to_vec()))
        .collect())
}

/// The built-in example slot functions for a case.
#[pyfunction]
fn example_slots(case: &str) -> PyResult<BTreeMap<String, String>> {
    let id = case_of(case)?;
    Ok(builtin_examples()
        .into_iter()
        .find(|(c, _)| *c == id)
        .map(|(_, slots)| slots)
        .unwrap())
}

/// Certify a case. With `slots = None` the built-in example is used.
/// Returns the certificate as a dict.
#[pyfunction]
#[pyo3(signature = (case, slots=None, seed=42, points=20))]
fn certify(
    py: Python<'_>,
    case: &str,
    slots: Option<BTreeMap<String, String>>,
    seed: u64,
    points: usize,
) -> PyResult<Py<PyAny>> {
    let id = case_of(case)?;
    let slots = match slots {
        Some(s) => s,
        None => example_slots(case)?,
    };
    let built = build_case(id, &slots).map_err(value_err)?;
    let cfg = CertifyConfig {
        seed,
        points: points.max(1),
        ..CertifyConfig::default()
    };
    let cert = certify_built(&built, &cfg).map_err(value_err)?;
    let json = serde_json::to_string(&cert).map_err(value_err)?;
    json_to_py(py, &json)
}

/// Berger-criterion verdict for a named subalgebra, as a dict.
#[pyfunction]
fn berger(py: Python<'_>, algebra: &str) -> PyResult<Py<PyAny>> {
    let s = g2hol::algebra::registry().get(algebra).map_err(value_err)?;
    let verdict = berger_verdict(&s);
    let json = serde_json::to_string(&verdict).map_err(value_err)?;
    json_to_py(py, &json)
}

/// Registered subalgebra names (parametric families accept e.g. "r_Ca(1)").
#[pyfunction]
fn algebras() -> Vec<String> {
    g2hol::algebra::registry()
        .names()
        .into_iter()
        .map(String::from)
        .collect()
}

#[pymodule]
fn g2hol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(diff, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(eval_jet, m)?)?;
    m.add_function(wrap_pyfunction!(cases, m)?)?;
    m.add_function(wrap_pyfunction!(case_slots, m)?)?;
    m.add_function(wrap_pyfunction!(example_slots, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(berger, m)?)?;
    m.add_function(wrap_pyfunction!(algebras, m)?)?;
    Ok(())
}
