use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The simultaneous iteration hit its iteration cap. Carries the best
    /// iterate seen so callers can still inspect it.
    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootsNotConverged {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("certificate unavailable: sigma = {sigma:e} is not positive")]
    CertificateUnavailable { sigma: f64 },

    #[error("Lyapunov functional is not positive definite at lambda = {lambda}")]
    IndefiniteFunctional { lambda: f64 },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("cannot fit decay rate: {0}")]
    Unfit(String),
}
