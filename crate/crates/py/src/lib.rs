//! Python bindings: rationals travel as canonical "p/q" strings, reports
//! come back as plain dicts.

use opdet_core::arith::{binom as binom_q, parse_rational, pochhammer as poch_q};
use opdet_core::detcore::OpKind;
use opdet_core::families::{FamilySpec, Variant};
use opdet_core::suite::{run_suite as run_suite_core, SuiteConfig, SuiteKind};
use opdet_core::symmetry::{verify_symmetry as verify_symmetry_core, Corollary, SymmetryCase};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use std::collections::BTreeMap;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Convert a serde_json value to a Python object through the json module.
fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    let json = PyModule::import(py, "json")?;
    Ok(json.call_method1("loads", (text,))?.unbind())
}

/// Rising factorial (u)_n of a rational u given as "p/q".
#[pyfunction]
fn pochhammer(u: &str, n: usize) -> PyResult<String> {
    let uu = parse_rational(u).map_err(err)?;
    Ok(poch_q(&uu, n).to_string())
}

/// Generalized binomial binom(x, k) of a rational x given as "p/q".
#[pyfunction]
fn binom(x: &str, k: usize) -> PyResult<String> {
    let xx = parse_rational(x).map_err(err)?;
    Ok(binom_q(&xx, k).to_string())
}

/// Coefficients (low to high, "p/q" strings) of a family polynomial; for the
/// quadratic-lattice families the polynomial lives in the λ variable.
#[pyfunction]
#[pyo3(signature = (family, n, monic = true))]
fn family_polynomial(family: &str, n: usize, monic: bool) -> PyResult<Vec<String>> {
    let spec = FamilySpec::parse(family).map_err(err)?;
    let variant = if monic { Variant::Monic } else { Variant::Normalized };
    let p = spec.polynomial(n, variant).map_err(err)?;
    Ok(p.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Squared norm of the monic polynomial against the normalized measure.
#[pyfunction]
fn family_norm_squared(family: &str, n: usize) -> PyResult<String> {
    let spec = FamilySpec::parse(family).map_err(err)?;
    Ok(spec.norm_squared(n).map_err(err)?.to_string())
}

/// Support points and weights of the family's discrete measure.
#[pyfunction]
#[pyo3(signature = (family, truncation = None))]
fn family_measure(family: &str, truncation: Option<usize>) -> PyResult<Vec<(String, String)>> {
    let spec = FamilySpec::parse(family).map_err(err)?;
    let meas = spec.measure(truncation).map_err(err)?;
    Ok(meas
        .support
        .iter()
        .map(|(x, w)| (x.to_string(), w.to_string()))
        .collect())
}

/// Verify the master identity for one family, operator and size pair.
#[pyfunction]
fn verify_main(py: Python<'_>, family: &str, op: &str, n: usize, m: usize) -> PyResult<Py<PyAny>> {
    let spec = FamilySpec::parse(family).map_err(err)?;
    let op = OpKind::parse(op).map_err(err)?;
    let rep = opdet_core::detcore::verify_main(&spec, op, n, m).map_err(err)?;
    to_py(py, &rep.to_json())
}

/// Verify the quadratic-lattice identity (dual Hahn, Racah or Wilson).
#[pyfunction]
fn verify_quadratic(py: Python<'_>, family: &str, n: usize, m: usize) -> PyResult<Py<PyAny>> {
    let spec = FamilySpec::parse(family).map_err(err)?;
    let rep = opdet_core::detcore::quad::verify_quadratic(&spec, n, m).map_err(err)?;
    to_py(py, &rep.to_json())
}

/// Verify one of the seven Casorati symmetries; params maps names like
/// "a", "alpha", "N" to "p/q" strings.
#[pyfunction]
fn verify_symmetry(
    py: Python<'_>,
    corollary: &str,
    params: BTreeMap<String, String>,
    n: usize,
    m: usize,
) -> PyResult<Py<PyAny>> {
    let corollary = Corollary::parse(corollary).map_err(err)?;
    let case = SymmetryCase::from_strings(corollary, &params, n, m).map_err(err)?;
    let rep = verify_symmetry_core(&case).map_err(err)?;
    to_py(py, &rep.to_json())
}

/// Verify the Λ²-weighted sum identity over a finite family.
#[pyfunction]
fn selberg_tise(
    py: Python<'_>,
    family: &str,
    op: &str,
    n: usize,
    m: usize,
    u: &str,
) -> PyResult<Py<PyAny>> {
    let spec = FamilySpec::parse(family).map_err(err)?;
    let op = OpKind::parse(op).map_err(err)?;
    let uu = parse_rational(u).map_err(err)?;
    let rep = opdet_core::selberg::verify_tise(&spec, op, n, m, &uu).map_err(err)?;
    to_py(py, &rep.to_json())
}

/// Verify a constant-term identity: dyson | morris | meixner | charlier |
/// ultra1 | ultra2, with rational parameters as "p/q" strings.
#[pyfunction]
#[pyo3(signature = (identity, n, m, params = None))]
fn ct_verify(
    py: Python<'_>,
    identity: &str,
    n: usize,
    m: usize,
    params: Option<BTreeMap<String, String>>,
) -> PyResult<Py<PyAny>> {
    use opdet_core::constterm as ct;
    let params = params.unwrap_or_default();
    let get = |k: &str| -> PyResult<opdet_core::Rational> {
        let s = params
            .get(k)
            .ok_or_else(|| PyValueError::new_err(format!("missing parameter '{k}'")))?;
        parse_rational(s).map_err(err)
    };
    let rep = match identity {
        "dyson" => ct::verify_dyson_k1(n).map_err(err)?,
        "morris" => {
            let x: usize = params
                .get("x")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| PyValueError::new_err("morris needs an integer 'x'"))?;
            ct::verify_morris_k1(n, m, x, &get("a")?).map_err(err)?
        }
        "meixner" => ct::verify_ct_meixner(n, m, &get("x")?, &get("a")?, &get("c")?).map_err(err)?,
        "charlier" => ct::verify_ct_charlier(n, m, &get("x")?, &get("a")?).map_err(err)?,
        "ultra1" => {
            ct::verify_ct_ultraspherical_i(n, m, &get("lambda")?, &get("x")?).map_err(err)?
        }
        "ultra2" => {
            ct::verify_ct_ultraspherical_ii(n, m, &get("lambda")?, &get("x")?).map_err(err)?
        }
        other => return Err(PyValueError::new_err(format!("unknown identity '{other}'"))),
    };
    to_py(py, &rep.to_json())
}

/// Run a verification suite and return the full report as a dict.
#[pyfunction]
#[pyo3(signature = (suite = "all", max_n = 2, max_m = 2, grid = 1, seed = 1, negative_controls = false, jobs = None))]
#[allow(clippy::too_many_arguments)]
fn run_suite(
    py: Python<'_>,
    suite: &str,
    max_n: usize,
    max_m: usize,
    grid: usize,
    seed: u64,
    negative_controls: bool,
    jobs: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let cfg = SuiteConfig {
        suite: SuiteKind::parse(suite).map_err(err)?,
        families: None,
        max_n,
        max_m,
        grid_points: grid,
        explicit_grid: None,
        seed,
        jobs,
        negative_controls,
    };
    let rep = py.detach(|| run_suite_core(&cfg));
    to_py(py, &rep.to_json())
}

/// Re-verify one case from its JSON form (a dict or JSON string).
#[pyfunction]
fn replay(py: Python<'_>, case_json: &str) -> PyResult<Py<PyAny>> {
    let v: serde_json::Value = serde_json::from_str(case_json).map_err(err)?;
    let case = v.get("case").cloned().unwrap_or(v);
    let outcome = opdet_core::suite::replay(&case).map_err(err)?;
    to_py(py, &serde_json::json!(outcome))
}

#[pymodule]
fn opdet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    m.add_function(wrap_pyfunction!(family_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(family_norm_squared, m)?)?;
    m.add_function(wrap_pyfunction!(family_measure, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main, m)?)?;
    m.add_function(wrap_pyfunction!(verify_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(verify_symmetry, m)?)?;
    m.add_function(wrap_pyfunction!(selberg_tise, m)?)?;
    m.add_function(wrap_pyfunction!(ct_verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
