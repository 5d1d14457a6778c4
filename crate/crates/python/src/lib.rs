//! Python bindings: `import mgt_fourier`.

use mgtf::asymptotics::default_eta_grid;
use mgtf::energy::default_lambda_grid;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: mgtf::Error) -> PyErr {
    match e {
        mgtf::Error::InvalidParams(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Coefficients (α, β, γ, κ, η, λ1).
#[pyclass(name = "SystemParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySystemParams {
    inner: mgtf::SystemParams,
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (alpha, beta, gamma, kappa, eta, lambda1 = 1.0))]
    fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        kappa: f64,
        eta: f64,
        lambda1: f64,
    ) -> PyResult<Self> {
        let inner =
            mgtf::SystemParams::new(alpha, beta, gamma, kappa, eta, lambda1).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// α = 2, β = 1, γ = 3, λ1 = 1.
    #[staticmethod]
    fn reference(kappa: f64, eta: f64) -> Self {
        Self {
            inner: mgtf::SystemParams::reference(kappa, eta),
        }
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }
    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }
    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa
    }
    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }
    #[getter]
    fn lambda1(&self) -> f64 {
        self.inner.lambda1
    }

    fn mu(&self) -> f64 {
        self.inner.mu()
    }

    fn stability_number(&self) -> f64 {
        self.inner.stability_number()
    }

    /// "subcritical", "critical" or "supercritical".
    fn regime(&self) -> String {
        self.inner.regime().to_string()
    }

    fn with_eta(&self, eta: f64) -> Self {
        Self {
            inner: self.inner.with_eta(eta),
        }
    }

    fn with_kappa(&self, kappa: f64) -> Self {
        Self {
            inner: self.inner.with_kappa(kappa),
        }
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "SystemParams(alpha={}, beta={}, gamma={}, kappa={}, eta={}, lambda1={})",
            p.alpha, p.beta, p.gamma, p.kappa, p.eta, p.lambda1
        )
    }
}

#[pyclass(name = "Certificate", frozen, get_all)]
struct PyCertificate {
    rho: f64,
    epsilon: f64,
    sigma: f64,
    ell: f64,
    omega: f64,
    c: f64,
    omega_cert: f64,
    valid: bool,
    reasons: Vec<String>,
    lambda_grid: Vec<f64>,
    margins: Vec<f64>,
}

/// `identity_residual` integrates over the recorded samples, so it is only
/// accurate with `stride = 1`.
#[pyclass(name = "Trajectory", frozen, get_all)]
struct PyTrajectory {
    lam: f64,
    times: Vec<f64>,
    /// Rows (u, v, w, θ).
    states: Vec<[f64; 4]>,
    energy: Vec<f64>,
    quasienergy: Vec<f64>,
    blow_up: bool,
    measured_rate: Option<f64>,
    identity_residual: f64,
}

/// `[a3, a2, a1, a0]` of the monic characteristic quartic.
#[pyfunction]
fn quartic_coefficients(p: &PySystemParams, lam: f64) -> [f64; 4] {
    let q = mgtf::build_quartic(&p.inner, lam);
    [q.a3, q.a2, q.a1, q.a0]
}

#[pyfunction]
fn hurwitz_stable(p: &PySystemParams, lam: f64) -> bool {
    mgtf::hurwitz_stable(&mgtf::build_quartic(&p.inner, lam))
}

#[pyfunction]
fn spectral_abscissa(p: &PySystemParams, lam: f64) -> PyResult<f64> {
    mgtf::spectral_abscissa(&p.inner, lam).map_err(to_py)
}

/// `(rate, unstable)` over the given eigenvalues (default: λ1 only).
#[pyfunction]
#[pyo3(signature = (p, spectrum = None))]
fn decay_rate(p: &PySystemParams, spectrum: Option<Vec<f64>>) -> PyResult<(f64, bool)> {
    let spectrum = spectrum.unwrap_or_else(|| vec![p.inner.lambda1]);
    let r = mgtf::decay_rate_spectrum(&p.inner, &spectrum).map_err(to_py)?;
    Ok((r.rate, r.unstable))
}

#[pyfunction]
fn theoretical_threshold(p: &PySystemParams) -> f64 {
    mgtf::theoretical_threshold(&p.inner)
}

#[pyfunction]
#[pyo3(signature = (p, spectrum = None))]
fn tau_star(p: &PySystemParams, spectrum: Option<Vec<f64>>) -> PyResult<f64> {
    let spectrum = spectrum.unwrap_or_else(|| vec![p.inner.lambda1]);
    mgtf::tau_star_spectrum(&p.inner, &spectrum).map_err(to_py)
}

#[pyfunction]
fn stability_predicate(p: &PySystemParams) -> bool {
    mgtf::stability_predicate(&p.inner)
}

#[pyfunction]
fn omega_of_eps(p: &PySystemParams, epsilon: f64) -> f64 {
    mgtf::omega_of_eps(&p.inner, epsilon)
}

/// `(omega_b, epsilon)` maximizing the rate bound.
#[pyfunction]
fn omega_b(p: &PySystemParams) -> PyResult<(f64, f64)> {
    mgtf::omega_b(&p.inner).map_err(to_py)
}

/// Energy `E` of the state `(u, v, w, θ)` in mode `lam`.
#[pyfunction]
fn energy(p: &PySystemParams, state: [f64; 4], lam: f64) -> f64 {
    mgtf::energy_e(&mgtf::ModeState::from_array(state, lam), &p.inner)
}

#[pyfunction]
#[pyo3(signature = (p, modes = 10))]
fn certified_rate(p: &PySystemParams, modes: usize) -> PyResult<PyCertificate> {
    let grid = default_lambda_grid(&p.inner, modes);
    let c = mgtf::certified_rate(&p.inner, &grid).map_err(to_py)?;
    Ok(PyCertificate {
        rho: c.rho,
        epsilon: c.epsilon,
        sigma: c.sigma,
        ell: c.ell,
        omega: c.omega,
        c: c.c,
        omega_cert: c.omega_cert,
        valid: c.valid,
        reasons: c.reasons.iter().map(|r| r.to_string()).collect(),
        lambda_grid: c.lambda_grid,
        margins: c.margins,
    })
}

#[pyfunction]
#[pyo3(signature = (p, state, lam, dt = 1e-3, t_end = 10.0, stride = 1))]
fn simulate_mode(
    p: &PySystemParams,
    state: [f64; 4],
    lam: f64,
    dt: f64,
    t_end: f64,
    stride: usize,
) -> PyResult<PyTrajectory> {
    let cfg = mgtf::SimConfig::new(dt, t_end).with_stride(stride);
    let x0 =
        mgtf::ModeState::try_new(state[0], state[1], state[2], state[3], lam).map_err(to_py)?;
    let t = mgtf::simulate_mode(&p.inner, &x0, &cfg).map_err(to_py)?;
    Ok(PyTrajectory {
        lam: t.lambda,
        measured_rate: mgtf::measured_rate(&t).ok(),
        identity_residual: mgtf::energy_identity_residual(&t, &p.inner),
        states: t.states.iter().map(|s| s.to_array()).collect(),
        times: t.times,
        energy: t.energy,
        quasienergy: t.quasienergy,
        blow_up: t.blow_up,
    })
}

/// `(eps_eta, p_value, root_found)` for strong coupling.
#[pyfunction]
fn eta_limit_probe(p: &PySystemParams, lam: f64) -> PyResult<(f64, f64, bool)> {
    let r = mgtf::eta_limit_probe(&p.inner, lam).map_err(to_py)?;
    Ok((r.eps_eta, r.p_value, r.root_found))
}

/// `(zeta, p_value, f_value, g_value)` for conductivity `kappa`.
#[pyfunction]
fn kappa_limit_probe(p: &PySystemParams, lam: f64, kappa: f64) -> PyResult<(f64, f64, f64, f64)> {
    let r = mgtf::kappa_limit_probe(&p.inner, lam, kappa).map_err(to_py)?;
    Ok((r.zeta, r.p_value, r.f_value, r.g_value))
}

/// `(omega, eta)`: best rate of the first mode over η at conductivity `kappa`.
#[pyfunction]
#[pyo3(signature = (p, kappa, points = 200))]
fn omega_kappa(p: &PySystemParams, kappa: f64, points: usize) -> PyResult<(f64, f64)> {
    let grid = default_eta_grid(&p.inner, kappa, points);
    let s = mgtf::omega_kappa_scan(&p.inner, kappa, &grid).map_err(to_py)?;
    Ok((s.omega, s.eta))
}

/// `(epsilon, omega_b, omega_star)` for the damped oscillator.
#[pyfunction]
fn oscillator_optimum() -> PyResult<(f64, f64, f64)> {
    let o = mgtf::osc_optimize().map_err(to_py)?;
    Ok((o.epsilon, o.omega_b, o.omega_star))
}

#[pymodule]
fn mgt_fourier(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(quartic_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_stable, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_abscissa, m)?)?;
    m.add_function(wrap_pyfunction!(decay_rate, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(tau_star, m)?)?;
    m.add_function(wrap_pyfunction!(stability_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(omega_of_eps, m)?)?;
    m.add_function(wrap_pyfunction!(omega_b, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(certified_rate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_mode, m)?)?;
    m.add_function(wrap_pyfunction!(eta_limit_probe, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_limit_probe, m)?)?;
    m.add_function(wrap_pyfunction!(omega_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_optimum, m)?)?;
    Ok(())
}
