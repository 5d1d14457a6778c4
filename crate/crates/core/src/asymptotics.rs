//! Behaviour of the decay rate for strong coupling (|η| → ∞), for large
//! conductivity (κ → ∞), and the subcritical counterpart.

use crate::charpoly::{build_quartic, decay_rate_mode, quartic_roots};
use crate::error::{Error, Result};
use crate::optimize;
use crate::params::{theoretical_threshold, SystemParams};
use crate::roots::{cubic_has_single_real_root, real_cubic_roots, MonicPolynomial};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaLimitProbe {
    pub eps_eta: f64,
    /// Quartic evaluated at `−ε_η`; tends to −1 as |η| grows.
    pub p_value: f64,
    /// A real root lies in `(−ε_η, 0)`, so the modal rate is at most `2ε_η`.
    pub root_found: bool,
}

/// Probe at `ε_η = (γκλ² + 1)/(αλ²η²)`.
pub fn eta_limit_probe(p: &SystemParams, lambda: f64) -> Result<EtaLimitProbe> {
    if p.eta == 0.0 {
        return Err(Error::InvalidParams("eta must be nonzero".into()));
    }
    let l2 = lambda * lambda;
    let eps_eta = (p.gamma * p.kappa * l2 + 1.0) / (p.alpha * l2 * p.eta * p.eta);
    let q = build_quartic(p, lambda);
    let p_value = q.eval_real(-eps_eta);
    let rs = quartic_roots(p, lambda)?;
    let root_found = rs
        .roots
        .iter()
        .any(|z| z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) && z.re > -eps_eta && z.re < 0.0);
    Ok(EtaLimitProbe {
        eps_eta,
        p_value,
        root_found,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaLimitConstants {
    /// `α²λ/(α³ − 4αβλ + 8γλ)`
    pub r: f64,
    /// Unique real root of `ξ³ − (α + λ/r)ξ² − γλ`, always above α.
    pub xi: f64,
}

pub fn kappa_limit_constants(p: &SystemParams, lambda: f64) -> Result<KappaLimitConstants> {
    if p.mu() < 0.0 {
        return Err(Error::UnsupportedRegime(
            "the large-kappa bound needs mu >= 0; use subcritical_value".into(),
        ));
    }
    let a = p.alpha;
    let r = a * a * lambda / (a * a * a - 4.0 * a * p.beta * lambda + 8.0 * p.gamma * lambda);
    let (b2, b1, b0) = (-(a + lambda / r), 0.0, -p.gamma * lambda);
    if !cubic_has_single_real_root(b2, b1, b0) {
        return Err(Error::Numerical(format!(
            "cubic defining xi has several real roots (r = {r})"
        )));
    }
    let xi = real_cubic_roots(b2, b1, b0)[0];
    Ok(KappaLimitConstants { r, xi })
}

/// `(f, g)` with `p = f + g`: `f` collects every κ and η term, `g` is the
/// rest. Coefficients highest power first; `f` has degree 3, `g` degree 4.
pub fn split_coefficients(p: &SystemParams, lambda: f64) -> ([f64; 4], [f64; 5]) {
    let (a, b, g, k) = (p.alpha, p.beta, p.gamma, p.kappa);
    let (l, e2) = (lambda, p.eta * p.eta);
    let f = [
        k * l,
        a * k * l + e2 * l * l,
        b * k * l * l + a * e2 * l * l,
        g * k * l * l,
    ];
    let gg = [1.0, a, b * l, g * l, 0.0];
    (f, gg)
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, v| acc * x + v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaLimitProbe {
    pub zeta: f64,
    pub p_value: f64,
    pub f_value: f64,
    pub g_value: f64,
    /// `κ/η² ≤ r`, in which case `ζ = α/2`; otherwise `ζ = ξ`.
    pub small_ratio: bool,
    pub constants: KappaLimitConstants,
}

/// Evaluates the split at `−ζ` for conductivity `kappa` (overriding `p.kappa`).
pub fn kappa_limit_probe(p: &SystemParams, lambda: f64, kappa: f64) -> Result<KappaLimitProbe> {
    let p = p.with_kappa(kappa);
    p.validate()?;
    let constants = kappa_limit_constants(&p, lambda)?;
    let small_ratio = p.eta != 0.0 && kappa / (p.eta * p.eta) <= constants.r;
    let zeta = if small_ratio {
        p.alpha / 2.0
    } else {
        constants.xi
    };
    let (fc, gc) = split_coefficients(&p, lambda);
    let f_value = horner(&fc, -zeta);
    let g_value = horner(&gc, -zeta);
    let p_value = build_quartic(&p, lambda).eval_real(-zeta);
    let scale = f_value.abs() + g_value.abs();
    if (p_value - f_value - g_value).abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Numerical(format!(
            "split mismatch: p = {p_value}, f + g = {}",
            f_value + g_value
        )));
    }
    Ok(KappaLimitProbe {
        zeta,
        p_value,
        f_value,
        g_value,
        small_ratio,
        constants,
    })
}

/// `p(−α)`, checked against `λμ(κλ − α)`. Negative values put a real root in
/// `(−α, 0)` since `p(0) > 0`.
pub fn subcritical_value(p: &SystemParams, lambda: f64) -> Result<f64> {
    let q = build_quartic(p, lambda);
    let x = -p.alpha;
    let value = q.eval_real(x);
    let closed = lambda * p.mu() * (p.kappa * lambda - p.alpha);
    let scale = [1.0, q.a3, q.a2, q.a1, q.a0]
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs() * p.alpha.powi(4 - i as i32))
        .sum::<f64>();
    if (value - closed).abs() > 1e-10 * scale {
        return Err(Error::Numerical(format!(
            "p(-alpha) = {value} disagrees with closed form {closed}"
        )));
    }
    Ok(value)
}

/// Geometric η grid for the κ-scan: from just above the threshold `√(τ(κ)μ)`
/// (or 1e-3 when μ ≤ 0) up to `10³(1 + κ)`.
pub fn default_eta_grid(p: &SystemParams, kappa: f64, points: usize) -> Vec<f64> {
    let p = p.with_kappa(kappa);
    let tau_mu = theoretical_threshold(&p) * p.mu();
    let lo = if tau_mu > 0.0 {
        tau_mu.sqrt() * 1.01
    } else {
        1e-3
    };
    optimize::grid(lo, 1e3 * (1.0 + kappa), points, true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaScan {
    /// Best modal rate found; a lower bound for the supremum over η.
    pub omega: f64,
    pub eta: f64,
}

/// `ω_κ`: best decay rate of the mode λ1 over the η grid, refined by golden
/// section between the neighbours of the best grid point.
pub fn omega_kappa_scan(p: &SystemParams, kappa: f64, eta_grid: &[f64]) -> Result<KappaScan> {
    if eta_grid.is_empty() {
        return Err(Error::InvalidParams("eta grid must be nonempty".into()));
    }
    let base = p.with_kappa(kappa);
    base.validate()?;
    let rate =
        |eta: f64| -> Result<f64> { Ok(decay_rate_mode(&base.with_eta(eta), base.lambda1)?.rate) };
    let rates = eta_grid
        .iter()
        .map(|&e| rate(e))
        .collect::<Result<Vec<_>>>()?;
    let i = optimize::argmax(&rates)
        .ok_or_else(|| Error::Numerical("no finite rate on the eta grid".into()))?;
    let mut best = KappaScan {
        omega: rates[i],
        eta: eta_grid[i],
    };
    if eta_grid.len() >= 3 {
        let lo = eta_grid[i.saturating_sub(1)];
        let hi = eta_grid[(i + 1).min(eta_grid.len() - 1)];
        let tol = 1e-10 * (1.0 + hi.abs());
        let (eta, omega) =
            optimize::golden_section_max(|e| rate(e).unwrap_or(f64::NEG_INFINITY), lo, hi, tol);
        if omega > best.omega {
            best = KappaScan { omega, eta };
        }
    }
    Ok(best)
}
