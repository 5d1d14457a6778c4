//! Structural parameters of the MGT-Fourier system and the constants that
//! depend on them alone.
//!
//! The per-mode model is
//!
//! ```text
//! u''' + α u'' + βλ u' + γλ u = ηλ θ
//! θ'   + κλ θ = −ηλ u'' − αηλ u'
//! ```
//!
//! where λ runs over the spectrum of the underlying positive operator and
//! `lambda1` is its minimum.

use std::fmt;

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};

/// Field-like scalar the closed-form constants are written over, so they can
/// be evaluated in exact rational arithmetic as well as in `f64`.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive {}

impl<T: Num + Copy + PartialOrd + FromPrimitive> Scalar for T {}

fn int<T: Scalar>(n: i32) -> T {
    T::from_i32(n).expect("small integer is representable")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Damping coefficient α > 0.
    pub alpha: f64,
    /// Dissipative modulus β > 0.
    pub beta: f64,
    /// Elastic modulus γ > 0.
    pub gamma: f64,
    /// Thermal conductivity κ > 0.
    pub kappa: f64,
    /// Coupling constant η (any real).
    pub eta: f64,
    /// Minimum of the spectrum, λ1 > 0.
    pub lambda1: f64,
}

impl SystemParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        kappa: f64,
        eta: f64,
        lambda1: f64,
    ) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma,
            kappa,
            eta,
            lambda1,
        };
        p.validate()?;
        Ok(p)
    }

    /// The parameter set used throughout the numerical comparison:
    /// α = 2, β = 1, γ = 3, λ1 = 1 (so μ = 1), with the given κ and η.
    pub fn reference(kappa: f64, eta: f64) -> Self {
        Self {
            alpha: 2.0,
            beta: 1.0,
            gamma: 3.0,
            kappa,
            eta,
            lambda1: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("lambda1", self.lambda1),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and > 0, got {value}"
                )));
            }
        }
        if !self.eta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "eta must be finite, got {}",
                self.eta
            )));
        }
        Ok(())
    }

    pub fn with_eta(self, eta: f64) -> Self {
        Self { eta, ..self }
    }

    pub fn with_kappa(self, kappa: f64) -> Self {
        Self { kappa, ..self }
    }

    /// μ = γ − αβ.
    pub fn mu(&self) -> f64 {
        self.gamma - self.alpha * self.beta
    }

    /// Stability number ϰ = β − γ/α. Always equals −μ/α.
    pub fn stability_number(&self) -> f64 {
        -self.mu() / self.alpha
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// μ < 0: the uncoupled MGT equation is dissipative.
    Subcritical,
    /// μ = 0: the uncoupled MGT equation conserves an energy.
    Critical,
    /// μ > 0: the uncoupled MGT equation has exponentially growing solutions.
    Supercritical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

pub fn classify_regime(p: &SystemParams) -> Regime {
    let mu = p.mu();
    if mu < 0.0 {
        Regime::Subcritical
    } else if mu > 0.0 {
        Regime::Supercritical
    } else {
        Regime::Critical
    }
}

/// (2κ/α²)(1 − α/(κλ1) + α²/(κ²λ1²)).
pub fn threshold_first_branch<T: Scalar>(alpha: T, kappa: T, lambda1: T) -> T {
    let x = alpha / (kappa * lambda1);
    int::<T>(2) * kappa / (alpha * alpha) * (T::one() - x + x * x)
}

/// τ(κ) over any [`Scalar`].
pub fn threshold<T: Scalar>(alpha: T, kappa: T, lambda1: T) -> T {
    if kappa < alpha / lambda1 {
        threshold_first_branch(alpha, kappa, lambda1)
    } else {
        int::<T>(2) * kappa / (alpha * alpha)
    }
}

/// ℓ = (4γ² + μ²)/(2αγ) + 2α²/λ1 over any [`Scalar`].
pub fn ell<T: Scalar>(alpha: T, beta: T, gamma: T, lambda1: T) -> T {
    let two = int::<T>(2);
    let mu = gamma - alpha * beta;
    (int::<T>(4) * gamma * gamma + mu * mu) / (two * alpha * gamma) + two * alpha * alpha / lambda1
}

/// Theoretical stability threshold τ(κ): exponential stability holds
/// whenever η² > τ(κ)·μ. Minimal, and equal to 2/(αλ1), at κ = α/λ1.
pub fn theoretical_threshold(p: &SystemParams) -> f64 {
    threshold(p.alpha, p.kappa, p.lambda1)
}

/// Sharper threshold valid in the scalar setting (spectrum {λ1}), where the
/// first branch of τ applies for every κ.
pub fn theoretical_threshold_1d(p: &SystemParams) -> f64 {
    threshold_first_branch(p.alpha, p.kappa, p.lambda1)
}

/// Sufficient condition for exponential stability: η² > τ(κ)μ.
///
/// At μ = 0 this degenerates to η ≠ 0; for μ < 0 it holds for every η.
pub fn stability_predicate(p: &SystemParams) -> bool {
    let mu = p.mu();
    if mu == 0.0 {
        return p.eta != 0.0;
    }
    p.eta * p.eta > theoretical_threshold(p) * mu
}

/// Constants fixed in the decay argument. `sigma` may be non-positive when
/// the threshold condition fails; see [`ProofConstants::sigma_positive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofConstants {
    /// Weight of F in L = W + ρF + ε²G.
    pub rho: f64,
    /// Dissipation margin, positive iff η² > τ(κ)μ.
    pub sigma: f64,
    /// Coefficient of ‖u_t‖₁² in the inequality for G.
    pub ell: f64,
}

impl ProofConstants {
    pub fn sigma_positive(&self) -> bool {
        self.sigma > 0.0
    }
}

pub fn proof_constants(p: &SystemParams) -> ProofConstants {
    let (a, k) = (p.alpha, p.kappa);
    let mu = p.mu();
    let tau = theoretical_threshold(p);
    let eta2 = p.eta * p.eta;
    let rho = 4.0 * (mu + k) / (a * eta2 + a * k * tau);
    let sigma = 2.0 * k * (eta2 - tau * mu) / (eta2 + k * tau);
    ProofConstants {
        rho,
        sigma,
        ell: ell(p.alpha, p.beta, p.gamma, p.lambda1),
    }
}

/// Conditions under which W + ρF dominates the energy:
/// η² > μ/(αλ1) and ρ > 2μλ1/(αη²λ1 − μ). Trivially true for μ ≤ 0, η ≠ 0.
pub fn equivalence_condition(p: &SystemParams, rho: f64) -> bool {
    let mu = p.mu();
    let eta2 = p.eta * p.eta;
    if mu <= 0.0 {
        return p.eta != 0.0;
    }
    let (a, l1) = (p.alpha, p.lambda1);
    eta2 > mu / (a * l1) && rho > 2.0 * mu * l1 / (a * eta2 * l1 - mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(alpha: f64, beta: f64, gamma: f64, kappa: f64, eta: f64, lambda1: f64) -> SystemParams {
        SystemParams::new(alpha, beta, gamma, kappa, eta, lambda1).unwrap()
    }

    #[test]
    fn regimes() {
        assert_eq!(
            classify_regime(&p(2.0, 1.0, 3.0, 1.0, 0.0, 1.0)),
            Regime::Supercritical
        );
        assert_eq!(p(2.0, 1.0, 3.0, 1.0, 0.0, 1.0).mu(), 1.0);
        assert_eq!(
            classify_regime(&p(1.0, 1.0, 1.0, 1.0, 0.0, 1.0)),
            Regime::Critical
        );
        let sub = p(2.0, 2.0, 1.0, 1.0, 0.0, 1.0);
        assert_eq!(classify_regime(&sub), Regime::Subcritical);
        assert_eq!(sub.mu(), -3.0);
    }

    #[test]
    fn mu_is_minus_alpha_times_stability_number() {
        let q = p(1.7, 0.3, 2.9, 1.0, 0.0, 1.0);
        assert_relative_eq!(
            q.mu(),
            -q.alpha * q.stability_number(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::new(0.0, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, -1.0, 0.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 1.0, 1.0, -3.0, 1.0).is_ok());
    }

    #[test]
    fn threshold_values() {
        // κ = α/λ1 gives 2/(αλ1).
        let q = p(2.0, 1.0, 3.0, 2.0, 0.0, 1.0);
        assert_relative_eq!(theoretical_threshold(&q), 1.0, max_relative = 1e-15);
        let q = p(3.0, 1.0, 3.0, 1.5, 0.0, 2.0);
        assert_relative_eq!(theoretical_threshold(&q), 2.0 / 6.0, max_relative = 1e-15);
        // Small κ: leading term 2/(κλ1²).
        let q = p(2.0, 1.0, 3.0, 1e-6, 0.0, 1.0);
        assert_relative_eq!(theoretical_threshold(&q) * 1e-6, 2.0, max_relative = 1e-5);
    }

    #[test]
    fn threshold_1d_values() {
        let q = p(2.0, 1.0, 3.0, 4.0, 0.0, 1.0);
        assert_relative_eq!(theoretical_threshold_1d(&q), 1.5, max_relative = 1e-15);
        let q = p(2.0, 1.0, 3.0, 2.0, 0.0, 1.0);
        assert_relative_eq!(theoretical_threshold_1d(&q), 1.0, max_relative = 1e-15);
        let q = p(2.0, 1.0, 3.0, 0.7, 0.0, 1.0);
        assert_eq!(theoretical_threshold_1d(&q), theoretical_threshold(&q));
    }

    #[test]
    fn threshold_minimum_at_alpha_over_lambda1() {
        let base = p(1.3, 1.0, 3.0, 1.0, 0.0, 0.7);
        let kmin = base.alpha / base.lambda1;
        let tmin = theoretical_threshold(&base.with_kappa(kmin));
        assert_relative_eq!(
            tmin,
            2.0 / (base.alpha * base.lambda1),
            max_relative = 1e-14
        );
        for i in 0..=400 {
            let k = 10f64.powf(-3.0 + 6.0 * i as f64 / 400.0);
            assert!(theoretical_threshold(&base.with_kappa(k)) >= tmin * (1.0 - 1e-15));
        }
        // Continuity across the branch switch.
        let below = theoretical_threshold(&base.with_kappa(kmin * (1.0 - 1e-12)));
        assert_relative_eq!(below, tmin, max_relative = 1e-10);
    }

    #[test]
    fn predicate_examples() {
        assert!(stability_predicate(&p(2.0, 1.0, 3.0, 2.0, 1.1, 1.0)));
        assert!(!stability_predicate(&p(2.0, 1.0, 3.0, 2.0, 0.9, 1.0)));
        assert!(stability_predicate(&p(1.0, 1.0, 1.0, 2.0, 0.01, 1.0)));
        assert!(!stability_predicate(&p(1.0, 1.0, 1.0, 2.0, 0.0, 1.0)));
        assert!(stability_predicate(&p(2.0, 2.0, 1.0, 2.0, 0.0, 1.0)));
    }

    #[test]
    fn ell_for_reference_parameters() {
        let c = proof_constants(&SystemParams::reference(2.0, 1.0));
        assert_relative_eq!(c.ell, 133.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(2.0 * c.ell, 133.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn sigma_vanishes_on_threshold() {
        let q = SystemParams::reference(2.0, 1.0);
        let c = proof_constants(&q);
        assert_eq!(c.sigma, 0.0);
        assert!(!c.sigma_positive());
    }

    #[test]
    fn sigma_in_critical_regime() {
        let q = p(1.0, 2.0, 2.0, 0.5, 0.8, 1.0);
        assert_eq!(q.mu(), 0.0);
        let tau = theoretical_threshold(&q);
        let c = proof_constants(&q);
        assert_relative_eq!(
            c.sigma,
            2.0 * 0.5 * 0.64 / (0.64 + 0.5 * tau),
            max_relative = 1e-14
        );
        assert!(c.sigma_positive());
    }

    #[test]
    fn equivalence_condition_examples() {
        let q = SystemParams::reference(2.0, 3.0);
        let c = proof_constants(&q);
        assert!(equivalence_condition(&q, c.rho));
        // η² = 0.4 < μ/(αλ1) = 0.5
        let q = SystemParams::reference(2.0, 0.4f64.sqrt());
        assert!(!equivalence_condition(&q, 100.0));
        let q = p(1.0, 1.0, 1.0, 2.0, 1.0, 1.0);
        assert!(equivalence_condition(&q, 1e-9));
    }
}
