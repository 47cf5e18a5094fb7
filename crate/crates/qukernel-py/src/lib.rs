use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qukernel::cartan::{make_datum, LieType};
use qukernel::cohomology::{self, AbelianGroup, PeriodicCochain3};
use qukernel::genuine::{genuineness_verdict_with, TableLabels};
use qukernel::grouptensors::{build_j, closed_phi, differential_dj, DiagTensor};
use qukernel::scalars::CycNum;
use qukernel::suites::{parse_suites, run, OracleMode, RunConfig};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_type(s: &str) -> PyResult<LieType> {
    s.parse().map_err(err)
}

fn parse_labels(s: &str) -> PyResult<TableLabels> {
    match s {
        "bourbaki" => Ok(TableLabels::Bourbaki),
        "swap-bc" => Ok(TableLabels::SwapBC),
        other => Err(err(format!("unknown table labels {other:?}"))),
    }
}

/// Exact element of the cyclotomic field Q(ζ_order).
#[pyclass(name = "Cyclotomic", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCyclotomic(CycNum);

#[pymethods]
impl PyCyclotomic {
    #[new]
    #[pyo3(signature = (order, value = 0))]
    fn new(order: u64, value: i64) -> PyResult<Self> {
        if order == 0 {
            return Err(err("order must be positive"));
        }
        Ok(PyCyclotomic(CycNum::from_int(order, value)))
    }

    /// ζ_order^k.
    #[staticmethod]
    fn root(order: u64, k: i64) -> PyResult<Self> {
        if order == 0 {
            return Err(err("order must be positive"));
        }
        Ok(PyCyclotomic(CycNum::root(order, k)))
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// k when the value is ζ_order^k, else None.
    fn as_root(&self) -> Option<u64> {
        self.0.as_root()
    }

    fn to_complex(&self) -> (f64, f64) {
        self.0.to_complex()
    }

    fn __add__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.0.cyc_add(&other.0).map(PyCyclotomic).map_err(err)
    }

    fn __sub__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.0.cyc_sub(&other.0).map(PyCyclotomic).map_err(err)
    }

    fn __mul__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.0.cyc_mul(&other.0).map(PyCyclotomic).map_err(err)
    }

    fn __neg__(&self) -> Self {
        PyCyclotomic(self.0.scale_int(-1))
    }

    fn __pow__(&self, e: i64, _modulo: Option<Py<PyAny>>) -> PyResult<Self> {
        self.0.pow(e).map(PyCyclotomic).map_err(err)
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> PyResult<bool> {
        self.0.cyc_eq(&other.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cyclotomic({}, {})", self.0.order(), self.0)
    }
}

/// Cartan datum of rank m at grid order n, with q a primitive n²-th root of unity.
#[pyclass(name = "CartanDatum", frozen)]
struct PyCartanDatum {
    datum: qukernel::cartan::CartanDatum,
    phi: DiagTensor,
}

#[pymethods]
impl PyCartanDatum {
    #[new]
    fn new(lie_type: &str, m: usize, n: u64) -> PyResult<Self> {
        let datum = make_datum(parse_type(lie_type)?, m, n).map_err(err)?;
        let phi = closed_phi(&datum);
        Ok(PyCartanDatum { datum, phi })
    }

    #[getter]
    fn lie_type(&self) -> String {
        self.datum.lie_type.to_string()
    }

    #[getter]
    fn m(&self) -> usize {
        self.datum.m
    }

    #[getter]
    fn n(&self) -> u64 {
        self.datum.n
    }

    #[getter]
    fn big_n(&self) -> u64 {
        self.datum.big_n
    }

    /// Cartan matrix.
    #[getter]
    fn a(&self) -> Vec<Vec<i64>> {
        self.datum.a.clone()
    }

    /// Symmetrized matrix c_ij = d_i a_ij.
    #[getter]
    fn c(&self) -> Vec<Vec<i64>> {
        self.datum.c.clone()
    }

    #[getter]
    fn d(&self) -> Vec<i64> {
        self.datum.d.clone()
    }

    /// Nilpotency orders of the E_i.
    #[getter]
    fn l(&self) -> Vec<u64> {
        self.datum.l.clone()
    }

    /// q^e.
    fn q(&self, e: i64) -> PyCyclotomic {
        PyCyclotomic(self.datum.q(e))
    }

    /// Exponent of ζ_N in the associator φ(a, b, c) on (ℤ_n)^m.
    fn phi_exponent(&self, a: Vec<i64>, b: Vec<i64>, c: Vec<i64>) -> PyResult<i64> {
        let m = self.datum.m;
        if a.len() != m || b.len() != m || c.len() != m {
            return Err(err(format!("each leg needs {m} coordinates")));
        }
        let idx: Vec<i64> = [a, b, c].concat();
        Ok(self.phi.exponent(&idx))
    }

    /// First index where d(J) differs from φ, or None; exhaustive over (ℤ_n)^{3m}.
    fn twist_differential_mismatch(&self) -> PyResult<Option<Vec<i64>>> {
        let dj = differential_dj(&self.datum, &build_j(&self.datum)).map_err(err)?;
        Ok(dj.first_difference(&self.phi))
    }

    fn __repr__(&self) -> String {
        format!("CartanDatum({:?}, {}, {})", self.lie_type(), self.datum.m, self.datum.n)
    }
}

/// 3-cochain on the periodic resolution of ℤ_{m_1} × … × ℤ_{m_k}, stored as
/// exponents of ζ_L on the slots Ψ(e_i+e_j+e_l).
#[pyclass(name = "Cochain3", frozen)]
struct PyCochain3 {
    inner: PeriodicCochain3,
}

#[pymethods]
impl PyCochain3 {
    /// Parses the text form: a line `mod L` then lines `i,j,l : e` with 1-based indices.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        PeriodicCochain3::from_text(text).map(|inner| PyCochain3 { inner }).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn is_cocycle(&self, orders: Vec<i64>) -> PyResult<bool> {
        let g = AbelianGroup::new(orders).map_err(err)?;
        Ok(cohomology::is_cocycle(&self.inner, &g))
    }

    /// Dict with `coboundary` and either `witnesses` or `violation`.
    fn is_coboundary<'py>(&self, py: Python<'py>, orders: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        let g = AbelianGroup::new(orders).map_err(err)?;
        let verdict = cohomology::is_coboundary(&self.inner, &g).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("coboundary", verdict.is_coboundary())?;
        match &verdict {
            cohomology::CoboundaryVerdict::Coboundary { witnesses } => out.set_item("witnesses", to_py(py, witnesses)?)?,
            cohomology::CoboundaryVerdict::NotCoboundary(v) => out.set_item("violation", to_py(py, v)?)?,
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Cochain3.from_text({:?})", self.inner.to_text())
    }
}

/// Genuineness verdict for the one-dimensional module table of a Cartan type.
#[pyfunction]
#[pyo3(signature = (lie_type, m, n, table_labels = "bourbaki"))]
fn genuineness(py: Python<'_>, lie_type: &str, m: usize, n: u64, table_labels: &str) -> PyResult<Py<PyAny>> {
    let t = parse_type(lie_type)?;
    let labels = parse_labels(table_labels)?;
    let v = py.detach(|| genuineness_verdict_with(t, m, n, labels)).map_err(err)?;
    to_py(py, &v)
}

/// Runs verification suites and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (lie_type, m, n, suites = "all", oracle = "cross-check", samples = None, seed = None, table_labels = "bourbaki"))]
#[allow(clippy::too_many_arguments)]
fn verify(
    py: Python<'_>,
    lie_type: &str,
    m: usize,
    n: u64,
    suites: &str,
    oracle: &str,
    samples: Option<usize>,
    seed: Option<u64>,
    table_labels: &str,
) -> PyResult<Py<PyAny>> {
    let mut cfg = RunConfig::new(parse_type(lie_type)?, m, n, parse_suites(suites).map_err(err)?);
    cfg.oracle = oracle.parse::<OracleMode>().map_err(err)?;
    if let Some(s) = samples {
        cfg.samples = s;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.table_labels = parse_labels(table_labels)?;
    cfg.validate().map_err(err)?;
    let report = py.detach(|| run(&cfg)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
#[pyo3(name = "qukernel")]
fn qukernel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCyclotomic>()?;
    m.add_class::<PyCartanDatum>()?;
    m.add_class::<PyCochain3>()?;
    m.add_function(wrap_pyfunction!(genuineness, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
