//! Time integration of single modes and finite superpositions of modes.
//!
//! Every operator in the system is a function of the same positive operator,
//! so modes decouple exactly: each eigenvalue λ gives an independent linear
//! system in `(u, v, w, θ) = (u, u', u'', θ)`.

use crate::energy::{energy_e, quasienergy_w, ModeState};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::params::SystemParams;

/// Blow-up cutoff on any state component.
pub const BLOW_UP: f64 = 1e300;
/// Smallest fit window accepted by [`measured_rate`].
pub const MIN_FIT_SAMPLES: usize = 100;

/// `x' = A x` for one mode, state order `(u, v, w, θ)`:
///
/// ```text
/// u' = v
/// v' = w
/// w' = −γλ u − βλ v − α w + ηλ θ
/// θ' = −αηλ v − ηλ w − κλ θ
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalSystemMatrix {
    pub a: Mat<4>,
}

impl ModalSystemMatrix {
    pub fn new(p: &SystemParams, lambda: f64) -> Self {
        let SystemParams {
            alpha,
            beta,
            gamma,
            kappa,
            eta,
            ..
        } = *p;
        let l = lambda;
        Self {
            a: [
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [-gamma * l, -beta * l, -alpha, eta * l],
                [0.0, -alpha * eta * l, -eta * l, -kappa * l],
            ],
        }
    }

    pub fn apply(&self, x: &[f64; 4]) -> [f64; 4] {
        linalg::matvec(&self.a, x)
    }

    /// Non-leading coefficients of `det(zI − A)`.
    pub fn characteristic_polynomial(&self) -> [f64; 4] {
        linalg::characteristic_polynomial(&self.a)
    }
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step<const N: usize, F>(f: F, x: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let axpy = |a: &[f64; N], s: f64, b: &[f64; N]| -> [f64; N] {
        let mut out = *a;
        for i in 0..N {
            out[i] += s * b[i];
        }
        out
    };
    let k1 = f(x);
    let k2 = f(&axpy(x, 0.5 * h, &k1));
    let k3 = f(&axpy(x, 0.5 * h, &k2));
    let k4 = f(&axpy(x, h, &k3));
    let mut out = *x;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Record every `stride`-th step (1 records all).
    pub stride: usize,
}

impl SimConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            stride: 1,
        }
    }

    pub fn with_stride(self, stride: usize) -> Self {
        Self { stride, ..self }
    }

    fn validate(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "t_end must be >= dt, got t_end = {} and dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParams("stride must be >= 1".into()));
        }
        Ok((self.t_end / self.dt).round() as usize)
    }
}

/// Recorded solution of one mode. `times` are equispaced.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub lambda: f64,
    pub times: Vec<f64>,
    pub states: Vec<ModeState>,
    pub energy: Vec<f64>,
    pub quasienergy: Vec<f64>,
    /// Integration stopped early because the state left the finite range.
    pub blow_up: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }
}

pub fn simulate_mode(p: &SystemParams, x0: &ModeState, cfg: &SimConfig) -> Result<Trajectory> {
    let steps = cfg.validate()?;
    let lambda = x0.lambda;
    let sys = ModalSystemMatrix::new(p, lambda);
    let cap = steps / cfg.stride + 1;
    let mut traj = Trajectory {
        lambda,
        times: Vec::with_capacity(cap),
        states: Vec::with_capacity(cap),
        energy: Vec::with_capacity(cap),
        quasienergy: Vec::with_capacity(cap),
        blow_up: false,
    };
    let record = |traj: &mut Trajectory, t: f64, s: ModeState| {
        traj.times.push(t);
        traj.energy.push(energy_e(&s, p));
        traj.quasienergy.push(quasienergy_w(&s, p));
        traj.states.push(s);
    };

    let mut x = x0.to_array();
    record(&mut traj, 0.0, *x0);
    for n in 1..=steps {
        x = rk4_step(|y| sys.apply(y), &x, cfg.dt);
        let state = ModeState::from_array(x, lambda);
        if x.iter().any(|c| !c.is_finite() || c.abs() > BLOW_UP) || !energy_e(&state, p).is_finite()
        {
            traj.blow_up = true;
            break;
        }
        if n % cfg.stride == 0 {
            record(&mut traj, n as f64 * cfg.dt, state);
        }
    }
    Ok(traj)
}

/// Which eigenvalues to superpose.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumSpec {
    Explicit(Vec<f64>),
    /// `λ_k = λ1·k²` for `k = 1..=modes` (Dirichlet Laplacian on an interval).
    Dirichlet {
        modes: usize,
    },
}

impl SpectrumSpec {
    pub fn values(&self, lambda1: f64) -> Result<Vec<f64>> {
        let values = match self {
            SpectrumSpec::Explicit(v) => v.clone(),
            SpectrumSpec::Dirichlet { modes } => {
                (1..=*modes).map(|k| lambda1 * (k * k) as f64).collect()
            }
        };
        if values.is_empty() {
            return Err(Error::InvalidParams("spectrum must be nonempty".into()));
        }
        if let Some(bad) = values.iter().find(|&&l| !(l >= lambda1)) {
            return Err(Error::InvalidParams(format!(
                "spectrum value {bad} is below lambda1 = {lambda1}"
            )));
        }
        Ok(values)
    }
}

/// Independent modal trajectories and their summed energies.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub modes: Vec<Trajectory>,
    /// Common time grid, truncated to the shortest mode if any blew up.
    pub times: Vec<f64>,
    pub total_energy: Vec<f64>,
    pub total_quasienergy: Vec<f64>,
    pub blow_up: bool,
}

impl Superposition {
    pub fn from_trajectories(modes: Vec<Trajectory>) -> Self {
        let len = modes.iter().map(Trajectory::len).min().unwrap_or(0);
        let times = modes
            .first()
            .map(|m| m.times[..len].to_vec())
            .unwrap_or_default();
        let total = |f: fn(&Trajectory) -> &Vec<f64>| -> Vec<f64> {
            (0..len)
                .map(|i| modes.iter().map(|m| f(m)[i]).sum())
                .collect()
        };
        let total_energy = total(|m| &m.energy);
        let total_quasienergy = total(|m| &m.quasienergy);
        let blow_up = modes.iter().any(|m| m.blow_up);
        Self {
            modes,
            times,
            total_energy,
            total_quasienergy,
            blow_up,
        }
    }
}

/// Integrates every mode of `spec`; `x0` holds one `(u, v, w, θ)` per mode.
pub fn simulate_superposition(
    p: &SystemParams,
    spec: &SpectrumSpec,
    x0: &[[f64; 4]],
    cfg: &SimConfig,
) -> Result<Superposition> {
    let lambdas = spec.values(p.lambda1)?;
    if x0.len() != lambdas.len() {
        return Err(Error::InvalidParams(format!(
            "{} initial states for {} modes",
            x0.len(),
            lambdas.len()
        )));
    }
    let modes = lambdas
        .iter()
        .zip(x0)
        .map(|(&lambda, x)| simulate_mode(p, &ModeState::from_array(*x, lambda), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(Superposition::from_trajectories(modes))
}

/// Cumulative integral of equispaced samples at every node, fourth order:
/// Simpson on even nodes, Simpson plus the 3/8 rule on odd nodes, and a cubic
/// interpolation formula on the first cell.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        for k in 1..n {
            out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
        }
        if n == 3 {
            out[2] = h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
        }
        return out;
    }
    out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    for k in 2..n {
        out[k] = if k % 2 == 0 {
            out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
        } else {
            out[k - 3] + 3.0 * h / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k])
        };
    }
    out
}

/// Max over the grid of `|W(t) − W(0) − ∫₀ᵗ (2μλv² − 2κλθ²) ds|`.
///
/// The exact solution satisfies `dW/dt = 2μλv² − 2κλθ²` for every η, so this
/// measures integration error only.
pub fn energy_identity_residual(traj: &Trajectory, p: &SystemParams) -> f64 {
    if traj.len() < 2 {
        return 0.0;
    }
    let mu = p.mu();
    let l = traj.lambda;
    let source: Vec<f64> = traj
        .states
        .iter()
        .map(|s| 2.0 * mu * l * s.v * s.v - 2.0 * p.kappa * l * s.theta * s.theta)
        .collect();
    let integral = cumulative_simpson(&source, traj.step());
    let w0 = traj.quasienergy[0];
    traj.quasienergy
        .iter()
        .zip(&integral)
        .map(|(w, i)| (w - w0 - i).abs())
        .fold(0.0, f64::max)
}

/// Decay rate fitted to an energy series: minus the least-squares slope of
/// `ln E` over the final half of the samples. Negative means growth.
pub fn measured_rate_series(times: &[f64], energy: &[f64]) -> Result<f64> {
    let n = times.len().min(energy.len());
    let start = n / 2;
    let window = n - start;
    if window < MIN_FIT_SAMPLES {
        return Err(Error::Unfit(format!(
            "fit window has {window} samples, need at least {MIN_FIT_SAMPLES}"
        )));
    }
    let mut ts = Vec::with_capacity(window);
    let mut ys = Vec::with_capacity(window);
    for i in start..n {
        let e = energy[i];
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Unfit(format!(
                "energy {e} at t = {} is not positive and finite",
                times[i]
            )));
        }
        ts.push(times[i]);
        ys.push(e.ln());
    }
    let tm = ts.iter().sum::<f64>() / window as f64;
    let ym = ys.iter().sum::<f64>() / window as f64;
    let (num, den) = ts.iter().zip(&ys).fold((0.0, 0.0), |(num, den), (t, y)| {
        (num + (t - tm) * (y - ym), den + (t - tm) * (t - tm))
    });
    Ok(-num / den)
}

pub fn measured_rate(traj: &Trajectory) -> Result<f64> {
    measured_rate_series(&traj.times, &traj.energy)
}
