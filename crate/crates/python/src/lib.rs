//! Python bindings: the identity catalog, explicit checks, seeded suites and
//! the numeric q-Pochhammer / theta primitives.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyFloat, PyString};

use qsv::harness::{self, BackendChoice, Format, SuiteConfig};
use qsv::identities::{catalog, lookup, IdentityDescriptor};
use qsv::qcore::{self, Nome, PochOrder};
use qsv::scalar::{NumericConfig, Scalar};
use qsv::Error;

create_exception!(qsv_py, QsvError, PyException);

fn err(e: Error) -> PyErr {
    match e {
        Error::Config(m) => PyValueError::new_err(m),
        other => QsvError::new_err(other.to_string()),
    }
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn to_json(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<String> {
    py.import("json")?.call_method1("dumps", (obj,))?.extract()
}

/// Exact "p/q" for a Python float.
fn float_text(v: &Bound<'_, PyAny>) -> PyResult<String> {
    let (p, q): (Bound<'_, PyAny>, Bound<'_, PyAny>) = v.call_method0("as_integer_ratio")?.extract()?;
    Ok(format!("{}/{}", p.str()?, q.str()?))
}

/// Python number or string → the textual form the core parsers accept.
/// Floats are taken at their exact binary value.
fn number_text(v: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(s) = v.cast::<PyString>() {
        return Ok(s.to_str()?.to_string());
    }
    if v.cast::<PyComplex>().is_ok() {
        let im = float_text(&v.getattr("imag")?)?;
        let sign = if im.starts_with('-') { "" } else { "+" };
        return Ok(format!("{}{sign}{im}i", float_text(&v.getattr("real")?)?));
    }
    if let Ok(x) = v.extract::<i64>() {
        return Ok(x.to_string());
    }
    if v.cast::<PyFloat>().is_ok() {
        return float_text(v);
    }
    // fractions.Fraction prints as p/q
    Ok(v.str()?.to_str()?.to_string())
}

fn backend(name: &str) -> PyResult<BackendChoice> {
    match name {
        "numeric" => Ok(BackendChoice::Numeric),
        "formal" => Ok(BackendChoice::Formal),
        "rational" => Ok(BackendChoice::Rational),
        "both" => Ok(BackendChoice::Both),
        other => Err(PyValueError::new_err(format!("unknown backend '{other}'"))),
    }
}

/// One catalog entry.
#[pyclass(frozen, module = "qsv_py")]
struct Identity {
    desc: &'static IdentityDescriptor,
}

#[pymethods]
impl Identity {
    #[getter]
    fn id(&self) -> &'static str {
        self.desc.id
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.desc.name
    }

    #[getter]
    fn free(&self) -> Vec<String> {
        self.desc.free.iter().map(|c| c.to_string()).collect()
    }

    #[getter]
    fn constraints(&self) -> Vec<(String, String)> {
        self.desc.constraints.iter().map(|(c, m)| (c.to_string(), m.to_string())).collect()
    }

    #[getter]
    fn n_range(&self) -> Option<(i64, i64)> {
        self.desc.int_param
    }

    #[getter]
    fn backends(&self) -> Vec<&'static str> {
        let s = self.desc.support;
        [(s.numeric, "numeric"), (s.formal, "formal"), (s.rational, "rational")].into_iter().filter(|(on, _)| *on).map(|(_, n)| n).collect()
    }

    /// Same as the module-level `check` with this identity.
    #[pyo3(signature = (params, backend="numeric", accuracy=30, formal_order=20, tolerance=None))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        params: &Bound<'py, PyDict>,
        backend: &str,
        accuracy: u32,
        formal_order: i64,
        tolerance: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        check(py, self.desc.id, params, backend, accuracy, formal_order, tolerance)
    }

    fn __repr__(&self) -> String {
        format!("Identity({:?}, {:?})", self.desc.id, self.desc.name)
    }
}

#[pyfunction]
fn identities() -> Vec<Identity> {
    catalog().iter().map(|desc| Identity { desc }).collect()
}

#[pyfunction]
fn identity(id: &str) -> PyResult<Identity> {
    lookup(id).map(|desc| Identity { desc }).map_err(err)
}

/// Checks one identity at explicit parameters. `params` maps symbol names
/// (and `q`, `n`) to numbers or strings such as "1/3" or "0.2-0.5i"; in the
/// formal backend values are monomials like "3/2*q^2". Returns the report
/// as a dict.
#[pyfunction]
#[pyo3(signature = (id, params, backend="numeric", accuracy=30, formal_order=20, tolerance=None))]
fn check<'py>(
    py: Python<'py>,
    id: &str,
    params: &Bound<'py, PyDict>,
    backend: &str,
    accuracy: u32,
    formal_order: i64,
    tolerance: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let raw: BTreeMap<String, String> = params.iter().map(|(k, v)| Ok((k.extract::<String>()?, number_text(&v)?))).collect::<PyResult<_>>()?;
    let choice = self::backend(backend)?;
    let rep = py.detach(|| harness::check_explicit(id, raw, choice, accuracy, formal_order, tolerance)).map_err(err)?;
    from_json(py, &serde_json::to_string(&rep).expect("report serializes"))
}

/// Runs a seeded suite. Keyword arguments are the suite config keys
/// (identities, backend, samples, accuracy, formal_order, seed, tolerance,
/// n, chains, timing). Returns the report as a dict, or its text rendering
/// when `text=True`.
#[pyfunction]
#[pyo3(signature = (text=false, **config))]
fn run_suite<'py>(py: Python<'py>, text: bool, config: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = match config {
        Some(d) => SuiteConfig::from_json(&to_json(py, d.as_any())?).map_err(err)?,
        None => SuiteConfig::default(),
    };
    let report = py.detach(|| harness::run_suite(&cfg)).map_err(err)?;
    let fmt = if text { Format::Text } else { Format::Json };
    let bytes = harness::emit_report(&report, fmt).map_err(err)?;
    let s = String::from_utf8(bytes).expect("reports are UTF-8");
    if text {
        Ok(PyString::new(py, &s).into_any())
    } else {
        from_json(py, &s)
    }
}

fn scalar(v: &Bound<'_, PyAny>, cfg: &NumericConfig) -> PyResult<Scalar> {
    cfg.parse(&number_text(v)?).map_err(err)
}

fn nome(v: &Bound<'_, PyAny>, cfg: &NumericConfig) -> PyResult<Nome> {
    Nome::new(scalar(v, cfg)?).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn output<'py>(py: Python<'py>, v: &Scalar, digits: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    match digits {
        Some(d) => Ok(PyString::new(py, &v.to_decimal(d)).into_any()),
        None => Ok(PyComplex::from_doubles(py, v.re().to_f64(), v.im().to_f64()).into_any()),
    }
}

/// (x;q)_n, or (x;q)_∞ when n is None. Returns a complex, or a decimal
/// string with `digits` significant digits.
#[pyfunction]
#[pyo3(signature = (x, q, n=None, accuracy=30, digits=None))]
fn qpoch<'py>(
    py: Python<'py>,
    x: &Bound<'py, PyAny>,
    q: &Bound<'py, PyAny>,
    n: Option<i64>,
    accuracy: u32,
    digits: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = NumericConfig::new(accuracy);
    let order = n.map_or(PochOrder::Infinite, PochOrder::Finite);
    let v = qcore::qpoch(&scalar(x, &cfg)?, &nome(q, &cfg)?, order, &cfg).map_err(err)?;
    output(py, &v, digits)
}

/// θ(x; q) = (x, q/x; q)_∞.
#[pyfunction]
#[pyo3(signature = (x, q, accuracy=30, digits=None))]
fn theta<'py>(py: Python<'py>, x: &Bound<'py, PyAny>, q: &Bound<'py, PyAny>, accuracy: u32, digits: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = NumericConfig::new(accuracy);
    let v = qcore::theta_product(&scalar(x, &cfg)?, &nome(q, &cfg)?, &cfg).map_err(err)?;
    output(py, &v, digits)
}

#[pymodule]
fn qsv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QsvError", m.py().get_type::<QsvError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Identity>()?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(qpoch, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    Ok(())
}
