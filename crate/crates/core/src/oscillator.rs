//! The damped oscillator `x'' + x' + x = 0`: its true energy decay rate
//! against the best rate reachable with the multiplier functional
//! `g = (1+ε)x² + y² + 2εxy`, which satisfies `g' + f = 0` with
//! `f = 2εx² + 2(1−ε)y²`.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::optimize;
use crate::roots::{roots, Monic};
use crate::simulate::{cumulative_simpson, rk4_step, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState {
    pub x: f64,
    pub y: f64,
}

impl OscState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// The functionals g, f and e at a fixed ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscFunctionals {
    pub epsilon: f64,
}

impl OscFunctionals {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }

    pub fn g(&self, s: &OscState) -> f64 {
        let e = self.epsilon;
        (1.0 + e) * s.x * s.x + s.y * s.y + 2.0 * e * s.x * s.y
    }

    pub fn f(&self, s: &OscState) -> f64 {
        let e = self.epsilon;
        2.0 * e * s.x * s.x + 2.0 * (1.0 - e) * s.y * s.y
    }

    pub fn e(&self, s: &OscState) -> f64 {
        0.5 * (s.x * s.x + s.y * s.y)
    }

    pub fn g_form(&self) -> Mat<2> {
        let e = self.epsilon;
        [[1.0 + e, e], [e, 1.0]]
    }

    pub fn f_form(&self) -> Mat<2> {
        let e = self.epsilon;
        [[2.0 * e, 0.0], [0.0, 2.0 * (1.0 - e)]]
    }

    pub fn e_form(&self) -> Mat<2> {
        [[0.5, 0.0], [0.0, 0.5]]
    }
}

/// Energy decay rate of the oscillator, `−2·max Re` over the roots of `z² + z + 1`.
pub fn osc_true_rate() -> Result<f64> {
    Ok(-2.0 * roots(&Monic(vec![1.0, 1.0]))?.max_real_part())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<OscState>,
}

pub fn osc_simulate(x0: OscState, cfg: &SimConfig) -> Result<OscTrajectory> {
    if !(cfg.dt > 0.0 && cfg.t_end >= cfg.dt) {
        return Err(Error::InvalidParams(format!(
            "need dt > 0 and t_end >= dt, got dt = {} and t_end = {}",
            cfg.dt, cfg.t_end
        )));
    }
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let rhs = |s: &[f64; 2]| [s[1], -s[0] - s[1]];
    let mut times = vec![0.0];
    let mut states = vec![x0];
    let mut s = [x0.x, x0.y];
    for n in 1..=steps {
        s = rk4_step(rhs, &s, cfg.dt);
        times.push(n as f64 * cfg.dt);
        states.push(OscState::new(s[0], s[1]));
    }
    Ok(OscTrajectory { times, states })
}

/// Max over the grid of `|g(t) − g(0) + ∫₀ᵗ f ds|`.
pub fn osc_identity_residual(traj: &OscTrajectory, epsilon: f64) -> f64 {
    if traj.states.len() < 2 {
        return 0.0;
    }
    let fun = OscFunctionals::new(epsilon);
    let fs: Vec<f64> = traj.states.iter().map(|s| fun.f(s)).collect();
    let h = traj.times[1] - traj.times[0];
    let integral = cumulative_simpson(&fs, h);
    let g0 = fun.g(&traj.states[0]);
    traj.states
        .iter()
        .zip(&integral)
        .map(|(s, i)| (fun.g(s) - g0 + i).abs())
        .fold(0.0, f64::max)
}

/// Slack on the tangency constraint, so that boundary points computed in
/// floating point still count as admissible.
const ADMISSIBLE_TOL: f64 = 1e-12;

/// Whether `ω g ≤ f` is guaranteed by the pair `(ε, ω)`.
pub fn osc_admissible(epsilon: f64, omega: f64) -> bool {
    let (e, w) = (epsilon, omega);
    if !(e > 0.0 && e < 1.0 && w > 0.0 && w <= 1.0) {
        return false;
    }
    let first = 2.0 * e - w - w * e;
    if !(first > 0.0) {
        return false;
    }
    let disc = (2.0 * w * e).powi(2) - 4.0 * first * (2.0 - 2.0 * e - w);
    disc <= ADMISSIBLE_TOL
}

/// `1 − √((1 − 3ε + 3ε²)/(1 + ε − ε²))`, the largest admissible ω at this ε.
pub fn osc_omega_of_eps(epsilon: f64) -> f64 {
    let e = epsilon;
    1.0 - ((1.0 - 3.0 * e + 3.0 * e * e) / (1.0 + e - e * e)).sqrt()
}

/// Largest eigenvalue of `ωG − F`; non-positive iff `ω g ≤ f` everywhere.
pub fn osc_rate_margin(epsilon: f64, omega: f64) -> Result<f64> {
    let fun = OscFunctionals::new(epsilon);
    let m = linalg::add(
        &linalg::scale(&fun.g_form(), omega),
        &linalg::scale(&fun.f_form(), -1.0),
    );
    Ok(linalg::sym_eigenvalues(&m)?[1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscOptimum {
    pub epsilon: f64,
    pub omega_b: f64,
    pub omega_star: f64,
}

impl OscOptimum {
    pub fn gap(&self) -> f64 {
        self.omega_star - self.omega_b
    }
}

/// Largest ω for which some ε satisfies the tangency constraint, by
/// bisection. Writing the constraint as `kε² − kε + (2ω − ω²) ≤ 0` with
/// `k = ω² − 2ω + 4`, the best ε is the vertex ½ and feasibility reads
/// `k ≥ 4(2ω − ω²)`.
fn osc_direct_optimum() -> (f64, f64) {
    let feasible = |w: f64| {
        let k = w * w - 2.0 * w + 4.0;
        k >= 4.0 * (2.0 * w - w * w) && osc_admissible(0.5, w)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    (0.5, lo)
}

/// `(ε_opt, ω_b)` from maximizing `osc_omega_of_eps`, checked against the
/// direct solution of the two-variable program.
pub fn osc_optimize() -> Result<OscOptimum> {
    let (eps, omega) = optimize::golden_section_max(osc_omega_of_eps, 1e-12, 1.0 - 1e-12, 1e-10);
    let (eps_direct, omega_direct) = osc_direct_optimum();
    if (omega - omega_direct).abs() > 1e-9 || (eps - eps_direct).abs() > 1e-6 {
        return Err(Error::Numerical(format!(
            "oscillator optimum disagrees: ({eps}, {omega}) vs ({eps_direct}, {omega_direct})"
        )));
    }
    if !osc_admissible(eps, omega) {
        return Err(Error::Numerical(format!(
            "optimum ({eps}, {omega}) is not admissible"
        )));
    }
    Ok(OscOptimum {
        epsilon: eps,
        omega_b: omega,
        omega_star: osc_true_rate()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn true_rate_is_one() {
        let rs = roots(&Monic(vec![1.0, 1.0])).unwrap();
        assert_abs_diff_eq!(rs.roots[0].re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rs.roots[0].im.abs(), 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rs.sum().re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rs.product().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(osc_true_rate().unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn omega_of_eps_values() {
        let wb = 1.0 - 5f64.sqrt() / 5.0;
        assert_abs_diff_eq!(osc_omega_of_eps(0.5), wb, epsilon = 1e-15);
        assert!(osc_omega_of_eps(1e-9).abs() < 1e-8);
        assert!(osc_omega_of_eps(1.0 - 1e-9).abs() < 1e-8);
    }

    #[test]
    fn admissibility() {
        let wb = 1.0 - 5f64.sqrt() / 5.0;
        assert!(osc_admissible(0.5, wb));
        assert!(!osc_admissible(0.5, 0.9));
        assert!(!osc_admissible(0.3, 2.0 * 0.3 / 1.3));
        assert!(!osc_admissible(0.0, 0.1));
        assert!(!osc_admissible(0.5, 0.0));
    }

    #[test]
    fn optimum() {
        let opt = osc_optimize().unwrap();
        assert_abs_diff_eq!(opt.epsilon, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(opt.omega_b, 1.0 - 5f64.sqrt() / 5.0, epsilon = 1e-9);
        assert!(opt.gap() > 0.4);
    }

    #[test]
    fn identity_residual() {
        let t = osc_simulate(OscState::new(1.0, 0.0), &SimConfig::new(1e-3, 20.0)).unwrap();
        assert!(osc_identity_residual(&t, 0.5) < 1e-8);
        let z = osc_simulate(OscState::new(0.0, 0.0), &SimConfig::new(1e-3, 1.0)).unwrap();
        assert_eq!(osc_identity_residual(&z, 0.5), 0.0);
    }

    #[test]
    fn residual_is_fourth_order() {
        let r = |dt: f64| {
            let t = osc_simulate(OscState::new(1.0, 0.0), &SimConfig::new(dt, 10.0)).unwrap();
            osc_identity_residual(&t, 0.5)
        };
        let ratio = r(0.1) / r(0.05);
        assert!((10.0..24.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn margin_at_optimum() {
        let wb = 1.0 - 5f64.sqrt() / 5.0;
        assert!(osc_rate_margin(0.5, wb).unwrap() <= 1e-12);
        assert!(osc_rate_margin(0.5, wb + 1e-3).unwrap() > 0.0);
    }
}
