#![allow(dead_code)]

use mgt_fourier::charpoly::quartic_roots;
use mgt_fourier::simulate::{measured_rate, simulate_mode, SimConfig};
use mgt_fourier::{ModeState, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Spectral abscissa and the distance in real part to the next root.
pub fn abscissa_and_gap(p: &SystemParams, lambda: f64) -> (f64, f64) {
    let rs = quartic_roots(p, lambda).unwrap();
    let a = rs.max_real_part();
    let next = rs
        .roots
        .iter()
        .map(|z| z.re)
        .filter(|re| *re < a - 1e-9 * (1.0 + a.abs()))
        .fold(f64::NEG_INFINITY, f64::max);
    (a, a - next)
}

/// Seeded parameter draws, half stable and half unstable, whose dominant
/// roots are separated from the rest by more than 0.1 in real part.
pub fn rate_draws(seed: u64, per_regime: usize) -> Vec<SystemParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut stable, mut unstable) = (Vec::new(), Vec::new());
    while stable.len() < per_regime || unstable.len() < per_regime {
        let p = SystemParams::new(
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.5..6.0),
            rng.gen_range(0.2..4.0),
            rng.gen_range(0.0..4.0),
            1.0,
        )
        .unwrap();
        let (a, gap) = abscissa_and_gap(&p, 1.0);
        if a.abs() < 0.05 || gap <= 0.1 {
            continue;
        }
        let bucket = if a < 0.0 { &mut stable } else { &mut unstable };
        if bucket.len() < per_regime {
            bucket.push(p);
        }
    }
    stable.into_iter().chain(unstable).collect()
}

/// `(measured, expected)` energy decay rates of the mode λ1 from unit
/// displacement data. The window is long enough for the subdominant roots
/// to fade and, when growing, short enough to stay below overflow.
pub fn rate_experiment(p: &SystemParams) -> (f64, f64) {
    let (a, gap) = abscissa_and_gap(p, p.lambda1);
    let mut t_end = (80.0 / a.abs()).max(60.0 / gap);
    if a > 0.0 {
        t_end = t_end.min(250.0 / a);
    }
    let lmax = p.lambda1;
    let dt = (0.1 / (p.kappa * lmax + p.eta * p.eta * lmax + 1.0)).min(0.01);
    let steps = (t_end / dt).round() as usize;
    let stride = (steps / 4000).max(1);
    let x0 = ModeState::new(1.0, 0.0, 0.0, 0.0, p.lambda1);
    let traj = simulate_mode(p, &x0, &SimConfig::new(dt, t_end).with_stride(stride)).unwrap();
    assert!(!traj.blow_up, "{p:?} blew up");
    (measured_rate(&traj).unwrap(), -2.0 * a)
}
