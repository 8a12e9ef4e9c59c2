//! Python bindings: polynomials, interlacer enumeration, certificates,
//! rank bounds and the full analysis record.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use interlacing::bounds::{rank_bounds as core_rank_bounds, KissingTable};
use interlacing::engine::{self, EngineError, SearchConfig};
use interlacing::exact::{self, IntPolynomial};
use interlacing::numberfield;
use interlacing::polytope;
use interlacing::survey::{self, verify, AnalyzeOptions};

create_exception!(interlacing_py, InterlacingError, PyException);
create_exception!(interlacing_py, BudgetExceeded, InterlacingError);

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    InterlacingError::new_err(e.to_string())
}

fn engine_err(e: EngineError) -> PyErr {
    match e {
        EngineError::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        other => err(other),
    }
}

fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, q: &BigInt, d: &BigInt) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.clone(), d.clone()))
}

/// Integer polynomial, built from text (`"x^2-x-1"`) or a list of
/// coefficients, leading first.
#[pyclass(name = "Polynomial", frozen, eq, hash, str, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyPolynomial {
    inner: IntPolynomial,
}

impl std::fmt::Display for PyPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.inner)
    }
}

impl From<IntPolynomial> for PyPolynomial {
    fn from(inner: IntPolynomial) -> Self {
        PyPolynomial { inner }
    }
}

#[derive(FromPyObject)]
enum PolyArg {
    Poly(PyPolynomial),
    Text(String),
    Coeffs(Vec<BigInt>),
}

impl PolyArg {
    fn into_poly(self) -> PyResult<IntPolynomial> {
        match self {
            PolyArg::Poly(p) => Ok(p.inner),
            PolyArg::Text(s) => {
                exact::parse_polynomial(&s).map_err(|e| PyValueError::new_err(e.to_string()))
            }
            PolyArg::Coeffs(c) => Ok(IntPolynomial::new(c)),
        }
    }
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(value: PolyArg) -> PyResult<Self> {
        Ok(value.into_poly()?.into())
    }

    /// Coefficients, leading first.
    #[getter]
    fn coeffs(&self) -> Vec<BigInt> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn eval(&self, x: BigInt) -> BigInt {
        self.inner.eval(&x)
    }

    fn discriminant(&self) -> PyResult<BigInt> {
        exact::discriminant(&self.inner).map_err(err)
    }

    fn is_squarefree(&self) -> PyResult<bool> {
        exact::is_squarefree(&self.inner).map_err(err)
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        exact::is_irreducible(&self.inner).map_err(err)
    }

    fn is_totally_real(&self) -> PyResult<bool> {
        exact::is_totally_real(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.inner)
    }
}

fn config(budget: u64, jobs: usize) -> SearchConfig {
    SearchConfig {
        budget,
        jobs: jobs.max(1),
        certificates: false,
    }
}

#[pyfunction]
fn interlaces(f: PolyArg, g: PolyArg) -> PyResult<bool> {
    engine::interlaces(&f.into_poly()?, &g.into_poly()?).map_err(engine_err)
}

/// All monic interlacers of a monic totally real `f`, sorted.
#[pyfunction]
#[pyo3(signature = (f, budget = 100_000_000, jobs = 1))]
fn enumerate_interlacers(
    py: Python<'_>,
    f: PolyArg,
    budget: u64,
    jobs: usize,
) -> PyResult<Vec<PyPolynomial>> {
    let f = f.into_poly()?;
    let set = py
        .detach(|| engine::enumerate_interlacers(&f, &config(budget, jobs)))
        .map_err(engine_err)?;
    Ok(set.polys().into_iter().map(Into::into).collect())
}

/// Number of totally positive dual elements of trace `t`.
#[pyfunction]
#[pyo3(signature = (f, t, budget = 100_000_000, jobs = 1))]
fn count_trace(py: Python<'_>, f: PolyArg, t: BigInt, budget: u64, jobs: usize) -> PyResult<usize> {
    let f = f.into_poly()?;
    let set = py
        .detach(|| engine::count_trace_t(&f, &t, &config(budget, jobs)))
        .map_err(engine_err)?;
    Ok(set.count())
}

/// Returns the number of scanned nodes; raises if an interlacer exists.
#[pyfunction]
#[pyo3(signature = (f, budget = 100_000_000))]
fn certify_non_interlacing(py: Python<'_>, f: PolyArg, budget: u64) -> PyResult<u64> {
    let f = f.into_poly()?;
    let cert = py
        .detach(|| engine::certify_non_interlacing(&f, &config(budget, 1)))
        .map_err(engine_err)?;
    Ok(cert.boxes_scanned)
}

/// `(signs, res_over_disc, product)` with exact `Fraction` values.
#[pyfunction]
fn lambda_vector<'py>(
    py: Python<'py>,
    f: PolyArg,
    g: PolyArg,
) -> PyResult<(Vec<i8>, Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let l = polytope::lambda_of(&f.into_poly()?, &g.into_poly()?).map_err(err)?;
    let signs = l.signs.iter().map(|s| *s as i8).collect();
    let rd = fraction(py, l.res_over_disc.numer(), l.res_over_disc.denom())?;
    let prod = fraction(py, l.product.numer(), l.product.denom())?;
    Ok((signs, rd, prod))
}

#[pyfunction]
fn rank_bounds<'py>(py: Python<'py>, degree: usize, m_count: u64) -> PyResult<Bound<'py, PyAny>> {
    let table = KissingTable::load().map_err(err)?;
    let report = core_rank_bounds(degree, m_count, &table).map_err(err)?;
    to_python(py, &report)
}

/// The full analysis record as a dict.
#[pyfunction]
#[pyo3(signature = (poly, trace = None, max_trace = 3, budget = 100_000_000, coeff_bound = 1, jobs = 1, assert_irreducible = false, assert_monogenic = false))]
#[allow(clippy::too_many_arguments)]
fn analyze<'py>(
    py: Python<'py>,
    poly: &str,
    trace: Option<u64>,
    max_trace: u64,
    budget: u64,
    coeff_bound: u64,
    jobs: usize,
    assert_irreducible: bool,
    assert_monogenic: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = AnalyzeOptions {
        trace,
        max_trace,
        budget,
        coeff_bound,
        jobs: jobs.max(1),
        assert_irreducible,
        assert_monogenic,
        ..AnalyzeOptions::default()
    };
    let record = py
        .detach(|| survey::analyze(poly, &opts))
        .map_err(|e| InterlacingError::new_err(format!("{}: {}", e.name, e.message)))?;
    to_python(py, &record)
}

#[pyfunction]
fn real_cyclotomic_minpoly(n: i64) -> PyResult<PyPolynomial> {
    numberfield::real_cyclotomic_minpoly(n)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn cubic_family(k: i64) -> PyPolynomial {
    numberfield::cubic_family(k).into()
}

/// `(element, span)` of the smallest span found with coefficients in `[-B, B]`.
#[pyfunction]
#[pyo3(signature = (f, coeff_bound = 1))]
fn min_span(f: PolyArg, coeff_bound: u64) -> PyResult<(PyPolynomial, f64)> {
    let eps = num_rational::BigRational::new(BigInt::from(1), BigInt::from(1u64 << 30));
    let rep = numberfield::min_span_search(&f.into_poly()?, coeff_bound, &eps).map_err(err)?;
    Ok((rep.best.element.clone().into(), rep.best.midpoint_f64()))
}

/// Runs a named verification suite (or `"all"`).
#[pyfunction]
fn run_suite<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    let results = py
        .detach(|| verify::run_suite(name))
        .map_err(|e| PyValueError::new_err(format!("unknown suite {}", e.0)))?;
    to_python(py, &results)
}

#[pymodule]
fn interlacing_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add("InterlacingError", m.py().get_type::<InterlacingError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("ENGINE_VERSION", survey::ENGINE_VERSION)?;
    m.add_function(wrap_pyfunction!(interlaces, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_interlacers, m)?)?;
    m.add_function(wrap_pyfunction!(count_trace, m)?)?;
    m.add_function(wrap_pyfunction!(certify_non_interlacing, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_vector, m)?)?;
    m.add_function(wrap_pyfunction!(rank_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(real_cyclotomic_minpoly, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_family, m)?)?;
    m.add_function(wrap_pyfunction!(min_span, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
