//! Python bindings for `relsep`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use relsep::interface::{run_check, run_scan, RunConfig};
use relsep::phase_analytic::unwrap_taus;
use relsep::{
    coefficient_pair, h0_matrix, j_matrix, kinematic_state, omega_matrix, resolve_c, Basis, CRule,
    SeparablePotential, TridiagonalRepr,
};

create_exception!(pyrelsep, RelsepError, PyException);

fn to_py(err: relsep::Error) -> PyErr {
    match err {
        relsep::Error::InvalidConfig(_) => PyValueError::new_err(err.to_string()),
        other => RelsepError::new_err(other.to_string()),
    }
}

fn potential(rows: Vec<Vec<f64>>) -> PyResult<SeparablePotential> {
    SeparablePotential::from_rows(&rows).map_err(to_py)
}

fn tridiagonal(t: TridiagonalRepr) -> (Vec<f64>, Vec<f64>) {
    (t.diag, t.offdiag)
}

/// One scattering channel: basis, kappa, lambda, alpha and the rule for C.
///
/// `c_rule` is "balance", "nonrel_limit" or "fixed"; the last needs `c_value`.
#[pyclass(frozen, name = "ChannelConfig")]
struct PyChannelConfig {
    inner: relsep::ChannelConfig,
}

#[pymethods]
impl PyChannelConfig {
    #[new]
    #[pyo3(signature = (basis, kappa, lam, alpha, c_rule = "balance", c_value = None))]
    fn new(
        basis: &str,
        kappa: u32,
        lam: f64,
        alpha: f64,
        c_rule: &str,
        c_value: Option<f64>,
    ) -> PyResult<Self> {
        let basis = match basis {
            "laguerre" => Basis::Laguerre,
            "oscillator" => Basis::Oscillator,
            other => return Err(PyValueError::new_err(format!("unknown basis {other:?}"))),
        };
        let c_rule = match (c_rule, c_value) {
            ("balance", None) => CRule::Balance,
            ("nonrel_limit", None) => CRule::NonrelLimit,
            ("fixed", Some(c)) => CRule::Fixed(c),
            ("fixed", None) => return Err(PyValueError::new_err("fixed C rule needs c_value")),
            (rule, _) => {
                return Err(PyValueError::new_err(format!(
                    "invalid C rule {rule:?} (c_value only goes with \"fixed\")"
                )))
            }
        };
        relsep::ChannelConfig::new(basis, kappa, lam, alpha, c_rule)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn basis(&self) -> &'static str {
        self.inner.basis.name()
    }

    #[getter]
    fn kappa(&self) -> u32 {
        self.inner.kappa
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// C at energy `epsilon`.
    fn c_value(&self, epsilon: f64) -> PyResult<f64> {
        resolve_c(epsilon, self.inner.c_rule, self.inner.alpha).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// S-matrix value at one energy.
#[pyclass(frozen, name = "SMatrixPoint")]
struct PySMatrixPoint {
    inner: relsep::SMatrixPoint,
}

#[pymethods]
impl PySMatrixPoint {
    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon
    }

    #[getter]
    fn s(&self) -> Complex64 {
        self.inner.s_value
    }

    /// Principal-branch phase shift in (-pi/2, pi/2].
    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.name()
    }

    /// Truncation N for the numeric method, None for closed forms.
    #[getter]
    fn truncation(&self) -> Option<usize> {
        self.inner.method.truncation()
    }

    #[getter]
    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let dict = PyDict::new(py);
        for (key, value) in &self.inner.diagnostics {
            dict.set_item(key, value)?;
        }
        Ok(dict)
    }

    fn __repr__(&self) -> String {
        format!(
            "SMatrixPoint(epsilon={}, s={}, tau={}, method={})",
            self.inner.epsilon,
            self.inner.s_value,
            self.inner.tau,
            self.inner.method.name()
        )
    }
}

fn point(result: relsep::Result<relsep::SMatrixPoint>) -> PyResult<PySMatrixPoint> {
    result.map(|inner| PySMatrixPoint { inner }).map_err(to_py)
}

/// Closed-form S matrix for an M x M potential, M <= 3.
#[pyfunction]
fn s_matrix_analytic(
    epsilon: f64,
    v: Vec<Vec<f64>>,
    cfg: &PyChannelConfig,
) -> PyResult<PySMatrixPoint> {
    point(relsep::s_matrix_analytic(
        epsilon,
        &potential(v)?,
        &cfg.inner,
    ))
}

/// Truncated J-matrix S matrix with truncation `n` >= M.
#[pyfunction]
fn s_matrix_numeric(
    epsilon: f64,
    v: Vec<Vec<f64>>,
    n: usize,
    cfg: &PyChannelConfig,
) -> PyResult<PySMatrixPoint> {
    point(relsep::s_matrix_numeric(
        epsilon,
        &potential(v)?,
        n,
        &cfg.inner,
    ))
}

/// Kinematic quantities at `epsilon` as a dict with keys C, K, eta and omega.
#[pyfunction]
fn kinematics<'py>(
    py: Python<'py>,
    epsilon: f64,
    cfg: &PyChannelConfig,
) -> PyResult<Bound<'py, PyDict>> {
    let state = kinematic_state(epsilon, &cfg.inner).map_err(to_py)?;
    let dict = PyDict::new(py);
    dict.set_item("C", state.c_value)?;
    dict.set_item("K", state.k)?;
    dict.set_item("eta", state.eta)?;
    dict.set_item("omega", state.omega)?;
    Ok(dict)
}

/// Sine-like and cosine-like coefficients s_n, c_n for n = 0..=n_max.
#[pyfunction]
fn coefficients(
    epsilon: f64,
    n_max: usize,
    cfg: &PyChannelConfig,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let state = kinematic_state(epsilon, &cfg.inner).map_err(to_py)?;
    let jmat = j_matrix(epsilon, n_max + 1, &cfg.inner).map_err(to_py)?;
    let pair = coefficient_pair(&state, &cfg.inner, &jmat).map_err(to_py)?;
    Ok((pair.s, pair.c))
}

/// H0, Omega and Jmat = H0 - epsilon Omega of size `size`, each as
/// (diagonal, off-diagonal) lists.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn matrices(
    epsilon: f64,
    size: usize,
    cfg: &PyChannelConfig,
) -> PyResult<(
    (Vec<f64>, Vec<f64>),
    (Vec<f64>, Vec<f64>),
    (Vec<f64>, Vec<f64>),
)> {
    let c = resolve_c(epsilon, cfg.inner.c_rule, cfg.inner.alpha).map_err(to_py)?;
    let h0 = h0_matrix(size, &cfg.inner, c).map_err(to_py)?;
    let omega = omega_matrix(size, &cfg.inner, c).map_err(to_py)?;
    let jmat = h0.add_scaled(-epsilon, &omega);
    Ok((tridiagonal(h0), tridiagonal(omega), tridiagonal(jmat)))
}

/// Continuous phase from principal-branch values on an ordered grid.
#[pyfunction]
fn unwrap_phase(taus: Vec<f64>) -> PyResult<Vec<f64>> {
    unwrap_taus(&taus).map_err(to_py)
}

/// Run an energy scan described by a JSON run config and return the output
/// text (CSV or JSON, as configured).
#[pyfunction]
#[pyo3(signature = (config_json, jobs = None))]
fn scan(py: Python<'_>, config_json: &str, jobs: Option<usize>) -> PyResult<String> {
    let config = RunConfig::from_json(config_json).map_err(to_py)?;
    let report = py.detach(|| run_scan(&config, jobs)).map_err(to_py)?;
    Ok(report.render(config.output.format))
}

/// Run the built-in self-check suite; returns (passed, rendered report).
#[pyfunction]
fn check(py: Python<'_>) -> (bool, String) {
    let report = py.detach(|| run_check(&relsep::interface::default_channels(), None));
    (report.passed(), report.render())
}

#[pymodule]
fn pyrelsep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RelsepError", m.py().get_type::<RelsepError>())?;
    m.add_class::<PyChannelConfig>()?;
    m.add_class::<PySMatrixPoint>()?;
    m.add_function(wrap_pyfunction!(s_matrix_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(s_matrix_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(kinematics, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(matrices, m)?)?;
    m.add_function(wrap_pyfunction!(unwrap_phase, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
