//! Energy-like functionals on a single mode, the decay certificate built from
//! them, and its matrix-level verification.
//!
//! All matrices use the state order `(u, v, w, θ)`. On a mode with eigenvalue
//! λ the norms reduce to `‖x‖₁² = λx²` and `‖x‖₋₁² = x²/λ`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::optimize;
use crate::params::{equivalence_condition, proof_constants, Scalar, SystemParams};
use crate::roots::real_cubic_roots;
use crate::simulate::ModalSystemMatrix;

/// Amplitudes of one mode: `u(t)`, `u'(t)`, `u''(t)`, `θ(t)` along the
/// eigenvector with eigenvalue `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub theta: f64,
    pub lambda: f64,
}

impl ModeState {
    pub fn new(u: f64, v: f64, w: f64, theta: f64, lambda: f64) -> Self {
        Self {
            u,
            v,
            w,
            theta,
            lambda,
        }
    }

    pub fn try_new(u: f64, v: f64, w: f64, theta: f64, lambda: f64) -> Result<Self> {
        let s = Self::new(u, v, w, theta, lambda);
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "lambda must be > 0, got {}",
                self.lambda
            )));
        }
        if self.to_array().iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams(
                "state amplitudes must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn from_array(x: [f64; 4], lambda: f64) -> Self {
        Self::new(x[0], x[1], x[2], x[3], lambda)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.u, self.v, self.w, self.theta]
    }
}

/// `q(x) = xᵀ m x` with `m` symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub m: Mat<4>,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        Self { m: linalg::zeros() }
    }

    /// `(a·x)²`.
    pub fn square(a: [f64; 4]) -> Self {
        Self::product(a, a)
    }

    /// `(a·x)(b·x)`.
    pub fn product(a: [f64; 4], b: [f64; 4]) -> Self {
        let mut m = linalg::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = 0.5 * (a[i] * b[j] + a[j] * b[i]);
            }
        }
        Self { m }
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            m: linalg::add(&self.m, &other.m),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            m: linalg::scale(&self.m, s),
        }
    }

    pub fn eval(&self, x: &ModeState) -> f64 {
        linalg::quadratic(&self.m, &x.to_array())
    }

    /// Form of `d/dt q(x(t))` along `x' = A x`, i.e. `Aᵀm + mA`.
    pub fn time_derivative(&self, a: &Mat<4>) -> Self {
        let ma = linalg::matmul(&self.m, a);
        Self {
            m: linalg::add(&linalg::transpose(&ma), &ma),
        }
    }

    /// Eigenvalues of `m`, ascending.
    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        linalg::sym_eigenvalues(&self.m)
    }
}

// linear functionals of (u, v, w, θ)
const V: [f64; 4] = [0.0, 1.0, 0.0, 0.0];
const THETA: [f64; 4] = [0.0, 0.0, 0.0, 1.0];

fn v_plus_alpha_u(alpha: f64) -> [f64; 4] {
    [alpha, 1.0, 0.0, 0.0]
}

fn w_plus_alpha_v(alpha: f64) -> [f64; 4] {
    [0.0, alpha, 1.0, 0.0]
}

/// Matrix `M_E` with `E = ½ xᵀ M_E x`.
pub fn energy_form(p: &SystemParams, lambda: f64) -> QuadraticForm {
    let a = p.alpha;
    QuadraticForm::square(v_plus_alpha_u(a))
        .scaled(lambda)
        .plus(&QuadraticForm::square(w_plus_alpha_v(a)))
        .plus(&QuadraticForm::square(V).scaled(lambda))
        .plus(&QuadraticForm::square(THETA))
}

/// `½ M_E`, so that `E = xᵀ Q x` like every other form here.
pub fn energy_quadratic(p: &SystemParams, lambda: f64) -> QuadraticForm {
    energy_form(p, lambda).scaled(0.5)
}

pub fn quasienergy_form(p: &SystemParams, lambda: f64) -> QuadraticForm {
    let a = p.alpha;
    QuadraticForm::square(v_plus_alpha_u(a))
        .scaled(p.gamma / a * lambda)
        .plus(&QuadraticForm::square(w_plus_alpha_v(a)))
        .plus(&QuadraticForm::square(V).scaled(-p.mu() / a * lambda))
        .plus(&QuadraticForm::square(THETA))
}

pub fn f_form(p: &SystemParams, lambda: f64) -> QuadraticForm {
    QuadraticForm::product(THETA, V)
        .scaled(p.eta)
        .plus(&QuadraticForm::square(V).scaled(0.5 * p.eta * p.eta * lambda))
        .plus(&QuadraticForm::square(THETA).scaled(0.5 / lambda))
}

pub fn g_form(p: &SystemParams) -> QuadraticForm {
    let a = p.alpha;
    QuadraticForm::product([-a, 1.0, 0.0, 0.0], w_plus_alpha_v(a)).scaled(-1.0)
}

pub fn lyapunov_form(p: &SystemParams, lambda: f64, rho: f64, epsilon: f64) -> QuadraticForm {
    quasienergy_form(p, lambda)
        .plus(&f_form(p, lambda).scaled(rho))
        .plus(&g_form(p).scaled(epsilon * epsilon))
}

/// `E = ½[λ(v+αu)² + (w+αv)² + λv² + θ²]`.
pub fn energy_e(x: &ModeState, p: &SystemParams) -> f64 {
    let a = p.alpha;
    let (s, r) = (x.v + a * x.u, x.w + a * x.v);
    0.5 * (x.lambda * s * s + r * r + x.lambda * x.v * x.v + x.theta * x.theta)
}

/// `W = (γ/α)λ(v+αu)² + (w+αv)² − (μ/α)λv² + θ²`; may be negative when μ > 0.
pub fn quasienergy_w(x: &ModeState, p: &SystemParams) -> f64 {
    let a = p.alpha;
    let (s, r) = (x.v + a * x.u, x.w + a * x.v);
    p.gamma / a * x.lambda * s * s + r * r - p.mu() / a * x.lambda * x.v * x.v + x.theta * x.theta
}

/// `F = ηθv + (η²/2)λv² + θ²/(2λ)`.
pub fn functional_f(x: &ModeState, p: &SystemParams) -> f64 {
    let eta = p.eta;
    eta * x.theta * x.v
        + 0.5 * eta * eta * x.lambda * x.v * x.v
        + x.theta * x.theta / (2.0 * x.lambda)
}

/// `G = −(v − αu)(w + αv)`.
pub fn functional_g(x: &ModeState, p: &SystemParams) -> f64 {
    let a = p.alpha;
    -(x.v - a * x.u) * (x.w + a * x.v)
}

/// `L = W + ρF + ε²G`.
pub fn lyapunov_l(x: &ModeState, p: &SystemParams, rho: f64, epsilon: f64) -> f64 {
    quasienergy_w(x, p) + rho * functional_f(x, p) + epsilon * epsilon * functional_g(x, p)
}

/// Inputs of the ω(ε) formula, generic so the reference coefficients can be
/// checked in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaCoefficients<T> {
    pub gamma_over_alpha: T,
    pub ell: T,
    pub sigma: T,
    /// |η|
    pub eta: T,
    pub lambda1: T,
}

impl<T: Scalar> OmegaCoefficients<T> {
    /// `[ε²(γ/α − ε|η|), ε², 2(σ − ε²ℓ − ε³|η|), λ1(2σ − 3ε|η|)]`
    pub fn branches(&self, eps: T) -> [T; 4] {
        let two = T::one() + T::one();
        let three = two + T::one();
        let e2 = eps * eps;
        [
            e2 * (self.gamma_over_alpha - eps * self.eta),
            e2,
            two * (self.sigma - e2 * self.ell - e2 * eps * self.eta),
            self.lambda1 * (two * self.sigma - three * eps * self.eta),
        ]
    }

    pub fn omega(&self, eps: T) -> T {
        let b = self.branches(eps);
        b.into_iter()
            .skip(1)
            .fold(b[0], |m, x| if x < m { x } else { m })
    }
}

impl OmegaCoefficients<f64> {
    pub fn from_params(p: &SystemParams) -> Self {
        let pc = proof_constants(p);
        Self {
            gamma_over_alpha: p.gamma / p.alpha,
            ell: pc.ell,
            sigma: pc.sigma,
            eta: p.eta.abs(),
            lambda1: p.lambda1,
        }
    }

    /// Smallest positive ε at which some branch vanishes. Beyond it ω ≤ 0.
    pub fn epsilon_max(&self) -> f64 {
        let mut zeros = Vec::new();
        if self.eta > 0.0 {
            zeros.push(self.gamma_over_alpha / self.eta);
            zeros.push(2.0 * self.sigma / (3.0 * self.eta));
            // ε³ + (ℓ/|η|)ε² − σ/|η|
            zeros.extend(real_cubic_roots(
                self.ell / self.eta,
                0.0,
                -self.sigma / self.eta,
            ));
        } else {
            zeros.push((self.sigma / self.ell).sqrt());
        }
        zeros
            .into_iter()
            .filter(|z| *z > 0.0)
            .fold(f64::INFINITY, f64::min)
    }
}

/// ω(ε) = min{ε²(γ/α − ε|η|), ε², 2(σ − ε²ℓ − ε³|η|), λ1(2σ − 3ε|η|)}.
///
/// Non-positive values mean ε is too large for the estimate.
pub fn omega_of_eps(p: &SystemParams, epsilon: f64) -> f64 {
    OmegaCoefficients::from_params(p).omega(epsilon)
}

const OMEGA_EPS_LO: f64 = 1e-6;
const OMEGA_GRID: usize = 200;
const OMEGA_TOL: f64 = 1e-8;

/// `(ω_b, ε_opt)`: the best rate the estimate yields, and where.
pub fn omega_b(p: &SystemParams) -> Result<(f64, f64)> {
    let coeffs = OmegaCoefficients::from_params(p);
    if !(coeffs.sigma > 0.0) {
        return Err(Error::CertificateUnavailable {
            sigma: coeffs.sigma,
        });
    }
    let hi = coeffs.epsilon_max();
    if !hi.is_finite() {
        return Err(Error::Numerical(format!(
            "no finite epsilon bound (sigma = {})",
            coeffs.sigma
        )));
    }
    let lo = OMEGA_EPS_LO.min(0.5 * hi);
    let (eps, omega) =
        optimize::grid_then_golden_max(|e| coeffs.omega(e), lo, hi, OMEGA_GRID, OMEGA_TOL);
    Ok((omega, eps))
}

/// Spectrum `{λ1·k² : k = 1..=modes}`.
pub fn default_lambda_grid(p: &SystemParams, modes: usize) -> Vec<f64> {
    (1..=modes).map(|k| p.lambda1 * (k * k) as f64).collect()
}

/// Extreme eigenvalues of the pencil `(M_L, Q_E)` on one mode, ascending.
/// `L/E` ranges over `[min, max]`.
pub fn equivalence_bounds(
    p: &SystemParams,
    lambda: f64,
    rho: f64,
    epsilon: f64,
) -> Result<(f64, f64)> {
    let ml = lyapunov_form(p, lambda, rho, epsilon);
    let ev = linalg::generalized_sym_eigenvalues(&ml.m, &energy_quadratic(p, lambda).m)?;
    Ok((ev[0], ev[3]))
}

/// Smallest `c ≥ 1` with `E/c ≤ L ≤ cE` on every mode of the grid.
pub fn equivalence_constant(
    p: &SystemParams,
    rho: f64,
    epsilon: f64,
    lambda_grid: &[f64],
) -> Result<f64> {
    let mut c: f64 = 1.0;
    for &lambda in lambda_grid {
        let (lo, hi) = equivalence_bounds(p, lambda, rho, epsilon)?;
        if !(lo > 0.0) {
            return Err(Error::IndefiniteFunctional { lambda });
        }
        c = c.max(hi).max(1.0 / lo);
    }
    Ok(c)
}

/// Largest eigenvalue of `AᵀM_L + M_L A + ω Q_E` on one mode, where
/// `xᵀQ_E x = E`. Non-positive means `dL/dt + ωE ≤ 0` on that mode.
pub fn lyapunov_margin(
    p: &SystemParams,
    lambda: f64,
    rho: f64,
    epsilon: f64,
    omega: f64,
) -> Result<f64> {
    let a = ModalSystemMatrix::new(p, lambda).a;
    let form = lyapunov_form(p, lambda, rho, epsilon)
        .time_derivative(&a)
        .plus(&energy_quadratic(p, lambda).scaled(omega));
    Ok(form.eigenvalues()?[3])
}

/// Absolute slack allowed on the largest eigenvalue, scaled by the size of
/// the matrix entries.
pub const LYAPUNOV_TOL: f64 = 1e-10;

fn lyapunov_tolerance(p: &SystemParams, lambda: f64, rho: f64, epsilon: f64, omega: f64) -> f64 {
    let a = ModalSystemMatrix::new(p, lambda).a;
    let form = lyapunov_form(p, lambda, rho, epsilon)
        .time_derivative(&a)
        .plus(&energy_quadratic(p, lambda).scaled(omega));
    let size = form.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    LYAPUNOV_TOL * size.max(1.0)
}

/// Whether `dL/dt + ωE ≤ 0` holds as a matrix inequality on the mode.
pub fn lyapunov_matrix_check(
    p: &SystemParams,
    lambda: f64,
    rho: f64,
    epsilon: f64,
    omega: f64,
) -> bool {
    match lyapunov_margin(p, lambda, rho, epsilon, omega) {
        Ok(m) => m <= lyapunov_tolerance(p, lambda, rho, epsilon, omega),
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateReason {
    /// μ < 0: the functionals are built for the critical and supercritical regimes.
    UnsupportedRegime,
    SigmaNonPositive,
    /// The conditions making W + ρF dominate the energy fail.
    NorFailed,
    LIndefinite {
        lambda: f64,
    },
    LyapunovFailed {
        lambda: f64,
    },
}

impl CertificateReason {
    pub fn code(&self) -> &'static str {
        match self {
            CertificateReason::UnsupportedRegime => "unsupported-regime",
            CertificateReason::SigmaNonPositive => "sigma<=0",
            CertificateReason::NorFailed => "nor-failed",
            CertificateReason::LIndefinite { .. } => "L-indefinite",
            CertificateReason::LyapunovFailed { .. } => "lyapunov-failed",
        }
    }
}

impl fmt::Display for CertificateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateReason::LIndefinite { lambda }
            | CertificateReason::LyapunovFailed { lambda } => {
                write!(f, "{}@lambda={}", self.code(), lambda)
            }
            _ => f.write_str(self.code()),
        }
    }
}

/// Exponential decay certificate `E(t) ≤ c²E(0)e^{−ω_cert t}`.
///
/// Quantities that could not be computed are NaN. `c` is one admissible
/// equivalence constant on the grid, not an optimal one.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub rho: f64,
    pub epsilon: f64,
    pub sigma: f64,
    pub ell: f64,
    pub omega: f64,
    pub c: f64,
    pub omega_cert: f64,
    pub valid: bool,
    pub reasons: Vec<CertificateReason>,
    pub lambda_grid: Vec<f64>,
    /// Largest eigenvalue of the Lyapunov matrix per grid λ (NaN if unchecked).
    pub margins: Vec<f64>,
}

pub fn certified_rate(p: &SystemParams, lambda_grid: &[f64]) -> Result<Certificate> {
    p.validate()?;
    if lambda_grid.is_empty() || lambda_grid.iter().any(|&l| !(l >= p.lambda1)) {
        return Err(Error::InvalidParams(format!(
            "lambda grid must be nonempty with every value >= lambda1 = {}",
            p.lambda1
        )));
    }
    let pc = proof_constants(p);
    let mut cert = Certificate {
        rho: pc.rho,
        epsilon: f64::NAN,
        sigma: pc.sigma,
        ell: pc.ell,
        omega: f64::NAN,
        c: f64::NAN,
        omega_cert: f64::NAN,
        valid: false,
        reasons: Vec::new(),
        lambda_grid: lambda_grid.to_vec(),
        margins: vec![f64::NAN; lambda_grid.len()],
    };
    if p.mu() < 0.0 {
        cert.reasons.push(CertificateReason::UnsupportedRegime);
        return Ok(cert);
    }
    let (omega, eps) = match omega_b(p) {
        Ok(v) => v,
        Err(Error::CertificateUnavailable { .. }) => {
            cert.reasons.push(CertificateReason::SigmaNonPositive);
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    cert.omega = omega;
    cert.epsilon = eps;
    if !equivalence_condition(p, pc.rho) {
        cert.reasons.push(CertificateReason::NorFailed);
    }
    match equivalence_constant(p, pc.rho, eps, lambda_grid) {
        Ok(c) => {
            cert.c = c;
            cert.omega_cert = omega / c;
        }
        Err(Error::IndefiniteFunctional { lambda }) => {
            cert.reasons.push(CertificateReason::LIndefinite { lambda });
        }
        Err(e) => return Err(e),
    }
    for (i, &lambda) in lambda_grid.iter().enumerate() {
        cert.margins[i] = lyapunov_margin(p, lambda, pc.rho, eps, omega)?;
        if !lyapunov_matrix_check(p, lambda, pc.rho, eps, omega) {
            cert.reasons
                .push(CertificateReason::LyapunovFailed { lambda });
        }
    }
    cert.valid = cert.reasons.is_empty() && omega > 0.0;
    Ok(cert)
}
