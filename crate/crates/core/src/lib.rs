//! Stability toolkit for the coupled Moore–Gibson–Thompson / Fourier
//! thermoelastic system
//!
//! ```text
//! u''' + α u'' + β A u' + γ A u − η A θ = 0
//! θ' + κ A θ + η A (α u' + u'') = 0
//! ```
//!
//! realized spectrally: every eigenvalue λ of `A` gives an independent
//! four-dimensional linear system.

// NaN must fail validation, hence `!(x > 0.0)` style checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod charpoly;
pub mod energy;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod oscillator;
pub mod params;
pub mod roots;
pub mod simulate;

pub use asymptotics::{
    eta_limit_probe, kappa_limit_constants, kappa_limit_probe, omega_kappa_scan, subcritical_value,
    EtaLimitProbe, KappaLimitConstants, KappaLimitProbe, KappaScan,
};
pub use charpoly::{
    build_mgt_cubic, build_quartic, decay_rate_mode, decay_rate_spectrum, hurwitz_stable,
    quartic_roots, spectral_abscissa, tau_star, tau_star_spectrum, Cubic, DecayRate, Quartic,
};
pub use energy::{
    certified_rate, energy_e, equivalence_constant, functional_f, functional_g, lyapunov_l,
    lyapunov_matrix_check, omega_b, omega_of_eps, quasienergy_w, Certificate, CertificateReason,
    ModeState, QuadraticForm,
};
pub use error::{Error, Result};
pub use oscillator::{
    osc_admissible, osc_identity_residual, osc_omega_of_eps, osc_optimize, osc_true_rate,
    OscFunctionals, OscOptimum, OscState,
};
pub use params::{
    classify_regime, equivalence_condition, proof_constants, stability_predicate,
    theoretical_threshold, theoretical_threshold_1d, ProofConstants, Regime, SystemParams,
};
pub use roots::RootSet;
pub use simulate::{
    energy_identity_residual, measured_rate, simulate_mode, simulate_superposition,
    ModalSystemMatrix, SimConfig, SpectrumSpec, Superposition, Trajectory,
};
