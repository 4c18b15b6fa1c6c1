//! Python bindings: the three tau pipelines, the Airy seeds, the
//! Painleve II oracle, and the Maya-diagram combinatorics.

use pii_tau_core::config::{verify_u_squared, Pipelines, RunConfig};
use pii_tau_core::error::Error;
use pii_tau_core::fredholm::{Method, TauResult};
use pii_tau_core::maya::{HalfInt, MayaDiagram};
use pii_tau_core::phase::SCALE_C_DEFAULT;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A tau value with provenance.
#[pyclass(name = "TauResult", frozen)]
struct PyTauResult {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    imag_residual: f64,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    s: f64,
    #[pyo3(get)]
    kappa: f64,
    #[pyo3(get)]
    error_estimate: f64,
}

impl From<TauResult> for PyTauResult {
    fn from(r: TauResult) -> Self {
        PyTauResult {
            value: r.value,
            imag_residual: r.imag_residual,
            method: r.method.name().to_string(),
            s: r.s,
            kappa: r.kappa,
            error_estimate: r.error_estimate,
        }
    }
}

#[pymethods]
impl PyTauResult {
    fn __repr__(&self) -> String {
        format!(
            "TauResult(method='{}', s={}, kappa={}, value={:.17e}, error_estimate={:.3e})",
            self.method, self.s, self.kappa, self.value, self.error_estimate
        )
    }
}

/// Ai(x) and Ai'(x).
#[pyfunction]
fn airy_ai(x: f64) -> PyResult<(f64, f64)> {
    let v = pii_tau_core::airy::airy_ai(x).map_err(err)?;
    Ok((v.ai, v.ai_prime))
}

/// Contour seed A(s) = 2^{-2/3} Ai(2^{-2/3} s).
#[pyfunction]
fn seed_a(s: f64) -> PyResult<f64> {
    pii_tau_core::seeds::seed_a(s).map_err(err)
}

/// Left-contour resolvent seed C(s).
#[pyfunction]
fn seed_c(s: f64) -> PyResult<f64> {
    pii_tau_core::seeds::seed_c(s).map_err(err)
}

fn pipelines() -> Pipelines {
    RunConfig::default().pipelines()
}

/// tau(s, kappa) by the requested pipeline: 'airy', 'widom' or 'minor'.
#[pyfunction]
#[pyo3(signature = (method, s, kappa))]
fn tau(method: &str, s: f64, kappa: f64) -> PyResult<PyTauResult> {
    let m: Method = method.parse().map_err(err)?;
    Ok(pipelines().tau(m, s, kappa).map_err(err)?.into())
}

/// The s-axis stretch between the contour and Airy pipelines.
#[pyfunction]
fn calibration_constant() -> f64 {
    SCALE_C_DEFAULT
}

/// Integrate Painleve II backward from Airy asymptotics; returns
/// (s_grid, u, u_prime) with s decreasing.
#[pyfunction]
#[pyo3(signature = (kappa, s_start=8.0, s_end=-4.0, tol=1e-10))]
fn solve_pii(
    kappa: f64,
    s_start: f64,
    s_end: f64,
    tol: f64,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let sol = pii_tau_core::pii_ode::solve_pii(kappa, s_start, s_end, tol).map_err(err)?;
    Ok((sol.s_grid, sol.u, sol.u_prime))
}

/// |u(s)^2 + (log tau)''(s)| with u from the ODE oracle.
#[pyfunction]
#[pyo3(signature = (s, kappa, method="airy"))]
fn u_squared_residual(s: f64, kappa: f64, method: &str) -> PyResult<f64> {
    let m: Method = method.parse().map_err(err)?;
    verify_u_squared(s, kappa, m, &pipelines()).map_err(err)
}

/// Young-diagram rows of the Maya diagram with the given particle and
/// hole positions (half-integers passed as floats, e.g. 2.5 and -0.5).
#[pyfunction]
fn maya_to_young(particles: Vec<f64>, holes: Vec<f64>) -> PyResult<Vec<usize>> {
    let to_half = |x: f64| -> PyResult<HalfInt> {
        let num = (2.0 * x).round();
        if (2.0 * x - num).abs() > 1e-9 {
            return Err(PyValueError::new_err(format!("{x} is not a half-integer")));
        }
        HalfInt::new(num as i64).map_err(err)
    };
    let p: PyResult<Vec<HalfInt>> = particles.into_iter().map(to_half).collect();
    let h: PyResult<Vec<HalfInt>> = holes.into_iter().map(to_half).collect();
    let d = MayaDiagram::new(p?, h?).map_err(err)?;
    Ok(d.to_young().rows)
}

#[pymodule]
fn pii_tau(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTauResult>()?;
    m.add_function(wrap_pyfunction!(airy_ai, m)?)?;
    m.add_function(wrap_pyfunction!(seed_a, m)?)?;
    m.add_function(wrap_pyfunction!(seed_c, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(calibration_constant, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pii, m)?)?;
    m.add_function(wrap_pyfunction!(u_squared_residual, m)?)?;
    m.add_function(wrap_pyfunction!(maya_to_young, m)?)?;
    Ok(())
}
