//! Python bindings for the `gftv` library.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gftv::corpus::{classical_function, random_polynomial_stream, CorpusEntry, DrawMode, Provenance};
use gftv::criteria::{Theorem, TheoremParams};
use gftv::disk::GridSpec;
use gftv::series::{make_function, DEFAULT_TRUNCATION};
use gftv::verifier::{SearchConfig, SearchMode};
use gftv::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(msg) => PyIOError::new_err(msg),
        Error::DenominatorVanishes { .. }
        | Error::ZeroOnContour { .. }
        | Error::UnstableWinding { .. }
        | Error::SingularTheta
        | Error::ExtraZeros { .. }
        | Error::DegenerateMax { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for gftv::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// `f(z) = z^p + sum c_k z^k` with `c_k = 0` for `p < k < p + n`.
#[pyclass(name = "FunctionSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyFunctionSpec {
    inner: gftv::FunctionSpec,
}

#[pymethods]
impl PyFunctionSpec {
    #[new]
    #[pyo3(signature = (p, n, coeffs, truncation = DEFAULT_TRUNCATION))]
    fn new(p: u32, n: u32, coeffs: BTreeMap<usize, Complex64>, truncation: usize) -> PyResult<Self> {
        Ok(Self { inner: make_function(p, n, &coeffs, truncation).py_err()? })
    }

    /// `identity`, `half-plane` or `monomial-pair(c)`.
    #[staticmethod]
    #[pyo3(signature = (name, p = 1, n = 1, truncation = DEFAULT_TRUNCATION))]
    fn named(name: &str, p: u32, n: u32, truncation: usize) -> PyResult<Self> {
        Ok(Self { inner: classical_function(name, p, n, truncation).py_err()? })
    }

    #[staticmethod]
    #[pyo3(signature = (p, n, degree, scale, mode = "decay", seed = 0, stream = 0))]
    fn random(p: u32, n: u32, degree: usize, scale: f64, mode: &str, seed: u64, stream: u64) -> PyResult<Self> {
        let mode: DrawMode = mode.parse().py_err()?;
        Ok(Self { inner: random_polynomial_stream(p, n, degree, scale, mode, seed, stream).py_err()? })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    fn coeffs(&self) -> BTreeMap<usize, Complex64> {
        self.inner.coeff_map()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z)
    }

    /// `1 + z f''/f'`
    fn convexity_functional(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.convexity_functional(z).py_err()
    }

    /// `f'/(p z^(p-1))`
    fn normalized_derivative(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.normalized_derivative(z).py_err()
    }

    /// `(1/p) z f'/f`
    fn starlike_functional(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.starlike_functional(z).py_err()
    }

    fn __repr__(&self) -> String {
        format!(
            "FunctionSpec(p={}, n={}, terms={})",
            self.inner.p(),
            self.inner.n(),
            self.inner.series().nonzero().count()
        )
    }
}

#[pyclass(name = "TheoremParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTheoremParams {
    inner: TheoremParams,
}

#[pymethods]
impl PyTheoremParams {
    /// `lam` is the λ of the subordination target (t24 only).
    #[new]
    #[pyo3(signature = (theorem, p = 1, n = 1, alpha = 0.0, beta = 1.0, gamma = 0.0, lam = 0.0))]
    fn new(theorem: &str, p: u32, n: u32, alpha: f64, beta: f64, gamma: f64, lam: f64) -> PyResult<Self> {
        let theorem: Theorem = theorem.parse().py_err()?;
        let inner = TheoremParams { theorem, p, n, alpha, beta, gamma, lambda: lam };
        inner.validate().py_err()?;
        Ok(Self { inner })
    }

    #[getter]
    fn theorem(&self) -> String {
        self.inner.theorem.to_string()
    }

    fn bound(&self) -> PyResult<f64> {
        self.inner.bound().py_err()
    }

    fn conclusion_threshold(&self) -> f64 {
        self.inner.conclusion_threshold()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "TheoremParams({}, p={}, n={}, alpha={}, beta={}, gamma={}, lam={})",
            p.theorem, p.p, p.n, p.alpha, p.beta, p.gamma, p.lambda
        )
    }
}

#[pyclass(name = "GridSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGridSpec {
    inner: GridSpec,
}

#[pymethods]
impl PyGridSpec {
    #[new]
    #[pyo3(signature = (radii = vec![0.9, 0.99, 0.999], samples = 4096, tol = 1e-9))]
    fn new(radii: Vec<f64>, samples: usize, tol: f64) -> PyResult<Self> {
        Ok(Self { inner: GridSpec::new(radii, samples, tol).py_err()? })
    }

    #[getter]
    fn radii(&self) -> Vec<f64> {
        self.inner.radii().to_vec()
    }

    #[getter]
    fn samples(&self) -> usize {
        self.inner.angular_count()
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.inner.tol()
    }
}

fn grid_or_default(grid: Option<&PyGridSpec>) -> GridSpec {
    grid.map_or_else(GridSpec::default, |g| g.inner.clone())
}

#[pyclass(name = "VerificationReport", frozen)]
struct PyReport {
    inner: gftv::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn id(&self) -> &str {
        &self.inner.id
    }

    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status.name()
    }

    #[getter]
    fn bound(&self) -> f64 {
        self.inner.bound
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius
    }

    #[getter]
    fn hyp_margin(&self) -> f64 {
        self.inner.hyp_margin
    }

    #[getter]
    fn concl_margin(&self) -> f64 {
        self.inner.concl_margin
    }

    #[getter]
    fn principle_ok(&self) -> Option<bool> {
        self.inner.principle_ok
    }

    #[getter]
    fn note(&self) -> Option<String> {
        self.inner.note.clone()
    }

    fn to_record(&self) -> String {
        self.inner.to_record()
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(id={:?}, status={}, hyp_margin={}, concl_margin={})",
            self.inner.id, self.inner.status, self.inner.hyp_margin, self.inner.concl_margin
        )
    }
}

/// Closed-form hypothesis constant.
#[pyfunction]
#[pyo3(signature = (theorem, p = 1, n = 1, alpha = 0.0, beta = 1.0, gamma = 0.0, lam = 0.0))]
fn bound(theorem: &str, p: u32, n: u32, alpha: f64, beta: f64, gamma: f64, lam: f64) -> PyResult<f64> {
    PyTheoremParams::new(theorem, p, n, alpha, beta, gamma, lam)?.bound()
}

/// `(lambda1, lambda2 or None, valid, diagnostic)`
#[pyfunction]
fn lambda_range(p: u32, n: u32) -> (f64, Option<f64>, bool, String) {
    let r = gftv::lambda_range(p, n);
    (r.lambda1, r.lambda2, r.valid, r.diagnostic)
}

#[pyfunction]
#[pyo3(signature = (params, m = None, samples = 200_000))]
fn theta_oracle<'py>(
    py: Python<'py>,
    params: &PyTheoremParams,
    m: Option<f64>,
    samples: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params.inner;
    let r = py.detach(|| gftv::theta_oracle(&p, m.unwrap_or(p.n as f64), samples)).py_err()?;
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("theta", r.theta)?;
    d.set_item("samples", r.samples)?;
    d.set_item("excluded", r.excluded)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (f, params, grid = None, id = "f"))]
fn verify(
    py: Python<'_>,
    f: &PyFunctionSpec,
    params: &PyTheoremParams,
    grid: Option<&PyGridSpec>,
    id: &str,
) -> PyResult<PyReport> {
    let g = grid_or_default(grid);
    let inner = py.detach(|| gftv::verify_implication(id, &f.inner, &params.inner, &g)).py_err()?;
    Ok(PyReport { inner })
}

/// Verifies every function; ids are `f0`, `f1`, ...
#[pyfunction]
#[pyo3(signature = (functions, params, grid = None))]
fn run_corpus(
    py: Python<'_>,
    functions: Vec<PyFunctionSpec>,
    params: &PyTheoremParams,
    grid: Option<&PyGridSpec>,
) -> PyResult<Vec<PyReport>> {
    let g = grid_or_default(grid);
    let entries: Vec<CorpusEntry> = functions
        .into_iter()
        .enumerate()
        .map(|(i, f)| CorpusEntry { id: format!("f{i}"), function: f.inner, provenance: Provenance::User })
        .collect();
    let rep = py.detach(|| gftv::run_corpus(&entries, &params.inner, &g)).py_err()?;
    Ok(rep.reports.into_iter().map(|inner| PyReport { inner }).collect())
}

#[pyfunction]
#[pyo3(signature = (f, r, samples = 4096, tol = 1e-9))]
fn winding_number(f: &PyFunctionSpec, r: f64, samples: usize, tol: f64) -> PyResult<i64> {
    gftv::winding_number(f.inner.series(), r, samples, tol).py_err()
}

#[pyfunction]
#[pyo3(signature = (f, lam, grid = None))]
fn disk_inequality_margin(f: &PyFunctionSpec, lam: f64, grid: Option<&PyGridSpec>) -> PyResult<f64> {
    gftv::disk_inequality_margin(&f.inner, lam, &grid_or_default(grid)).py_err()
}

#[pyfunction]
#[pyo3(signature = (f, lam, grid = None))]
fn containment_subordination_check(f: &PyFunctionSpec, lam: f64, grid: Option<&PyGridSpec>) -> PyResult<bool> {
    gftv::containment_subordination_check(&f.inner, lam, &grid_or_default(grid)).py_err()
}

/// Jack's lemma data for `w(z) = sum c_k z^k`, `w(0) = 0`.
#[pyfunction]
#[pyo3(signature = (coeffs, r0, samples = 4096, tol = 1e-12))]
fn jack_check<'py>(
    py: Python<'py>,
    coeffs: BTreeMap<usize, Complex64>,
    r0: f64,
    samples: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let top = coeffs.keys().next_back().copied().unwrap_or(1).max(1);
    let w = gftv::TestFunction::from_map(&coeffs, top).py_err()?;
    let r = gftv::jack_check(&w, r0, samples, tol).py_err()?;
    let d = PyDict::new(py);
    d.set_item("order", r.order)?;
    d.set_item("z0", r.z0)?;
    d.set_item("m", r.m_estimate)?;
    d.set_item("residual", r.residual)?;
    d.set_item("second_order", r.second_order)?;
    d.set_item("passes", r.passes())?;
    Ok(d)
}

/// Returns `(witness_trial or None, accepted, trials)`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (params, trials = 10_000, seed = 7, degree = 4, scale = 0.3, delta = 0.0, grid = None))]
fn search_counterexample(
    py: Python<'_>,
    params: &PyTheoremParams,
    trials: usize,
    seed: u64,
    degree: usize,
    scale: f64,
    delta: f64,
    grid: Option<&PyGridSpec>,
) -> PyResult<(Option<usize>, usize, usize)> {
    let g = grid_or_default(grid);
    let cfg = SearchConfig { mode: SearchMode::from_delta(delta).py_err()?, seed, trials, degree, scale };
    let out = py.detach(|| gftv::search_counterexample(&params.inner, &cfg, &g)).py_err()?;
    Ok((out.witness.map(|w| w.trial), out.accepted, out.trials))
}

/// `[(id, FunctionSpec), ...]`
#[pyfunction]
fn load_corpus(path: &str) -> PyResult<Vec<(String, PyFunctionSpec)>> {
    let entries = gftv::load_corpus(path).py_err()?;
    Ok(entries.into_iter().map(|e| (e.id, PyFunctionSpec { inner: e.function })).collect())
}

#[pyfunction]
fn save_corpus(path: &str, entries: Vec<(String, PyFunctionSpec)>) -> PyResult<()> {
    let entries: Vec<CorpusEntry> = entries
        .into_iter()
        .map(|(id, f)| CorpusEntry { id, function: f.inner, provenance: Provenance::User })
        .collect();
    gftv::save_corpus(path, &entries).py_err()
}

#[pymodule]
#[pyo3(name = "gftv")]
fn gftv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunctionSpec>()?;
    m.add_class::<PyTheoremParams>()?;
    m.add_class::<PyGridSpec>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_range, m)?)?;
    m.add_function(wrap_pyfunction!(theta_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(winding_number, m)?)?;
    m.add_function(wrap_pyfunction!(disk_inequality_margin, m)?)?;
    m.add_function(wrap_pyfunction!(containment_subordination_check, m)?)?;
    m.add_function(wrap_pyfunction!(jack_check, m)?)?;
    m.add_function(wrap_pyfunction!(search_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(load_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(save_corpus, m)?)?;
    Ok(())
}
