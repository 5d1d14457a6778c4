//! Per-mode characteristic polynomials, Hurwitz stability, spectral abscissa
//! and decay rates, and the exact stability threshold τ⋆(κ).

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::roots::{self, real_quadratic_roots, MonicPolynomial, RootSet};

/// `z⁴ + a3 z³ + a2 z² + a1 z + a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartic {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

/// `z³ + b2 z² + b1 z + b0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub b2: f64,
    pub b1: f64,
    pub b0: f64,
}

impl MonicPolynomial for Quartic {
    fn lower_coefficients(&self) -> Vec<f64> {
        vec![self.a3, self.a2, self.a1, self.a0]
    }
}

impl MonicPolynomial for Cubic {
    fn lower_coefficients(&self) -> Vec<f64> {
        vec![self.b2, self.b1, self.b0]
    }
}

/// Characteristic quartic of the mode with eigenvalue `lambda`.
pub fn build_quartic(p: &SystemParams, lambda: f64) -> Quartic {
    let SystemParams {
        alpha: a,
        beta: b,
        gamma: g,
        kappa: k,
        eta,
        ..
    } = *p;
    let l = lambda;
    let e2 = eta * eta;
    Quartic {
        a3: a + k * l,
        a2: b * l + a * k * l + e2 * l * l,
        a1: g * l + b * k * l * l + a * e2 * l * l,
        a0: g * k * l * l,
    }
}

/// The uncoupled MGT factor: at η = 0 the quartic is `(z + κλ)·q₀(z)`.
pub fn build_mgt_cubic(p: &SystemParams, lambda: f64) -> Cubic {
    Cubic {
        b2: p.alpha,
        b1: p.beta * lambda,
        b0: p.gamma * lambda,
    }
}

/// Third Hurwitz determinant `Δ₃ = a3·a2·a1 − a1² − a3²·a0`.
pub fn hurwitz_margin(q: &Quartic) -> f64 {
    q.a3 * q.a2 * q.a1 - q.a1 * q.a1 - q.a3 * q.a3 * q.a0
}

/// Routh–Hurwitz test: every root has negative real part.
pub fn hurwitz_stable(q: &Quartic) -> bool {
    q.a3 > 0.0 && q.a1 > 0.0 && q.a0 > 0.0 && hurwitz_margin(q) > 0.0
}

/// Routh–Hurwitz test for a monic cubic.
pub fn hurwitz_stable_cubic(c: &Cubic) -> bool {
    c.b2 > 0.0 && c.b0 > 0.0 && c.b2 * c.b1 > c.b0
}

pub fn quartic_roots(p: &SystemParams, lambda: f64) -> Result<RootSet> {
    roots::roots(&build_quartic(p, lambda))
}

/// Largest real part among the roots of the mode's quartic.
pub fn spectral_abscissa(p: &SystemParams, lambda: f64) -> Result<f64> {
    Ok(quartic_roots(p, lambda)?.max_real_part())
}

/// Energy decay rate ω⋆ of a mode (or of a set of modes).
///
/// The energy is quadratic in the state, so it decays like `e^{−ω⋆ t}` with
/// `ω⋆ = −2·abscissa`. For unstable modes `rate` is negative (a growth rate)
/// and `unstable` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub rate: f64,
    pub unstable: bool,
}

impl DecayRate {
    fn from_abscissa(abscissa: f64) -> Self {
        if abscissa == 0.0 {
            return Self {
                rate: 0.0,
                unstable: false,
            };
        }
        Self {
            rate: -2.0 * abscissa,
            unstable: abscissa > 0.0,
        }
    }
}

pub fn decay_rate_mode(p: &SystemParams, lambda: f64) -> Result<DecayRate> {
    Ok(DecayRate::from_abscissa(spectral_abscissa(p, lambda)?))
}

/// Minimum over the supplied modes of [`decay_rate_mode`]. On an infinite
/// spectrum this is only an upper bound on the true rate.
pub fn decay_rate_spectrum(p: &SystemParams, spectrum: &[f64]) -> Result<DecayRate> {
    if spectrum.is_empty() {
        return Err(Error::InvalidParams("spectrum must be nonempty".into()));
    }
    let mut worst = f64::NEG_INFINITY;
    for &lambda in spectrum {
        if !(lambda >= p.lambda1) {
            return Err(Error::InvalidParams(format!(
                "spectrum value {lambda} is below lambda1 = {}",
                p.lambda1
            )));
        }
        worst = worst.max(spectral_abscissa(p, lambda)?);
    }
    Ok(DecayRate::from_abscissa(worst))
}

/// Coefficients `(A, B, C)` of `Δ₃(s) = A s² + B s + C` with `s = η²`.
pub fn hurwitz_margin_in_eta2(p: &SystemParams, lambda: f64) -> (f64, f64, f64) {
    let base = build_quartic(&p.with_eta(0.0), lambda);
    let l2 = lambda * lambda;
    let a = p.alpha;
    let (a3, c2, c1, a0) = (base.a3, base.a2, base.a1, base.a0);
    // a2(s) = c2 + λ² s, a1(s) = c1 + αλ² s
    let qa = a3 * a * l2 * l2 - a * a * l2 * l2;
    let qb = a3 * (c2 * a * l2 + c1 * l2) - 2.0 * c1 * a * l2;
    let qc = a3 * c2 * c1 - c1 * c1 - a3 * a3 * a0;
    (qa, qb, qc)
}

/// Exact threshold in closed form: the larger real root of `Δ₃(η²) = 0`.
/// Zero for μ ≤ 0.
pub fn tau_star_closed_form(p: &SystemParams, lambda: f64) -> f64 {
    if p.mu() <= 0.0 {
        return 0.0;
    }
    let (qa, qb, qc) = hurwitz_margin_in_eta2(p, lambda);
    match real_quadratic_roots(qa, qb, qc).last() {
        Some(&s) => s.max(0.0),
        None => 0.0,
    }
}

/// Threshold by bisection on the sign of the spectral abscissa.
pub fn tau_star_bisection(p: &SystemParams, lambda: f64) -> Result<f64> {
    if p.mu() <= 0.0 {
        return Ok(0.0);
    }
    let unstable =
        |s: f64| -> Result<bool> { Ok(spectral_abscissa(&p.with_eta(s.sqrt()), lambda)? > 0.0) };
    if !unstable(0.0)? {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while unstable(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Numerical(
                "no stable coupling found while bracketing tau_star".into(),
            ));
        }
    }
    while hi - lo > 1e-14 * (1.0 + hi) {
        let mid = 0.5 * (lo + hi);
        if unstable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// τ⋆(κ) = sup{η² : the quartic has a root with positive real part}.
///
/// Computed in closed form and cross-checked against bisection; a
/// disagreement beyond `1e-6` (relative to `1 + τ⋆`) is a numerical failure.
/// The `eta` field of `p` is ignored.
pub fn tau_star(p: &SystemParams, lambda: f64) -> Result<f64> {
    let closed = tau_star_closed_form(p, lambda);
    let bisected = tau_star_bisection(p, lambda)?;
    if (closed - bisected).abs() > 1e-6 * (1.0 + closed.abs()) {
        return Err(Error::Numerical(format!(
            "tau_star closed form {closed} disagrees with bisection {bisected}"
        )));
    }
    Ok(closed)
}

/// τ⋆ over a set of modes: the max of the per-mode thresholds.
pub fn tau_star_spectrum(p: &SystemParams, spectrum: &[f64]) -> Result<f64> {
    spectrum
        .iter()
        .try_fold(0.0f64, |acc, &lambda| Ok(acc.max(tau_star(p, lambda)?)))
}
