//! Low-degree polynomial roots.
//!
//! All complex roots of a monic polynomial come from a Weierstrass
//! (Durand–Kerner) simultaneous iteration. Real cubics with a single real root
//! additionally get a closed-form Cardano path, and quadratics a cancellation
//! free formula.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 500;
const UPDATE_TOL: f64 = 1e-12;

/// A monic real polynomial, `z^n + c[0] z^(n-1) + ... + c[n-1]`.
pub trait MonicPolynomial {
    /// Non-leading coefficients, highest power first.
    fn lower_coefficients(&self) -> Vec<f64>;

    fn degree(&self) -> usize {
        self.lower_coefficients().len()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.lower_coefficients(), z)
    }

    fn eval_real(&self, x: f64) -> f64 {
        self.lower_coefficients()
            .iter()
            .fold(1.0, |acc, c| acc * x + c)
    }
}

/// Plain coefficient list. Useful for the oscillator's quadratic and in tests.
#[derive(Debug, Clone, PartialEq)]
pub struct Monic(pub Vec<f64>);

impl MonicPolynomial for Monic {
    fn lower_coefficients(&self) -> Vec<f64> {
        self.0.clone()
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
}

/// Rounding-error bound for evaluating the polynomial at `z` by Horner.
fn eval_noise(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let bound = coeffs.iter().fold(1.0, |acc, c| acc * r + c.abs());
    8.0 * f64::EPSILON * bound * (coeffs.len() as f64 + 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Sorted by real part, then imaginary part.
    pub roots: Vec<Complex64>,
    /// max |p(z)| over the returned roots.
    pub residual: f64,
}

impl RootSet {
    pub fn max_real_part(&self) -> f64 {
        self.roots
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.roots.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.roots.iter().product()
    }

    /// Real roots, taken as those with |Im z| below `tol`.
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|z| z.im.abs() <= tol)
            .map(|z| z.re)
            .collect()
    }
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(
        |a, b| match a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal),
            o => o,
        },
    );
}

/// All roots of a monic polynomial by Weierstrass iteration.
///
/// Initial guesses sit on the circle of radius `1 + max|c_k|` (a bound on
/// every root modulus), rotated off the real axis. Iteration stops once every
/// update is below `1e-12` relative to the iterate, or every residual is at the
/// rounding floor of the evaluation (the only attainable criterion for
/// clustered roots).
pub fn roots<P: MonicPolynomial + ?Sized>(poly: &P) -> Result<RootSet> {
    let coeffs = poly.lower_coefficients();
    let n = coeffs.len();
    if n == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            residual: 0.0,
        });
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParams(
            "polynomial coefficients must be finite".into(),
        ));
    }
    if n == 1 {
        return Ok(RootSet {
            roots: vec![Complex64::new(-coeffs[0], 0.0)],
            residual: 0.0,
        });
    }

    let radius = 1.0 + coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut best = z.clone();
    let mut best_residual = f64::INFINITY;

    for _ in 0..MAX_ITERATIONS {
        let mut max_update = 0.0f64;
        for i in 0..n {
            let zi = z[i];
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (zi - z[j]));
            if denom.norm() == 0.0 {
                // coincident iterates; nudge apart
                z[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_update = f64::INFINITY;
                continue;
            }
            let delta = horner(&coeffs, zi) / denom;
            z[i] = zi - delta;
            max_update = max_update.max(delta.norm() / (1.0 + z[i].norm()));
        }

        let mut residual = 0.0f64;
        let mut at_floor = true;
        for &zi in &z {
            let r = horner(&coeffs, zi).norm();
            residual = residual.max(r);
            if r > eval_noise(&coeffs, zi) {
                at_floor = false;
            }
        }
        if residual < best_residual {
            best_residual = residual;
            best.copy_from_slice(&z);
        }
        if max_update <= UPDATE_TOL || at_floor {
            sort_roots(&mut z);
            return Ok(RootSet { roots: z, residual });
        }
    }

    sort_roots(&mut best);
    Err(Error::RootsNotConverged {
        iterations: MAX_ITERATIONS,
        residual: best_residual,
        best,
    })
}

/// Real roots of `a x² + b x + c` with `a ≠ 0`, ascending. Uses the
/// cancellation-free form `q = −(b + sign(b)√D)/2`, roots `q/a` and `c/q`.
pub fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut out = if q == 0.0 {
        // b = 0 and c = 0
        vec![0.0, 0.0]
    } else {
        vec![q / a, c / q]
    };
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Real roots of the monic cubic `x³ + b2 x² + b1 x + b0`, ascending.
///
/// Cardano's formula when the discriminant gives one real root, the
/// trigonometric form when there are three.
pub fn real_cubic_roots(b2: f64, b1: f64, b0: f64) -> Vec<f64> {
    // depressed cubic t³ + p t + q with x = t − b2/3
    let shift = b2 / 3.0;
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut out = if disc > 0.0 {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v - shift]
    } else if p == 0.0 {
        vec![-shift]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    };
    // one Newton polish per root
    for x in out.iter_mut() {
        let f = ((*x + b2) * *x + b1) * *x + b0;
        let df = (3.0 * *x + 2.0 * b2) * *x + b1;
        if df != 0.0 {
            *x -= f / df;
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Sign of the discriminant-based classification for `x³ + b2 x² + b1 x + b0`:
/// true iff the cubic has exactly one real root (simple) and two non-real.
pub fn cubic_has_single_real_root(b2: f64, b1: f64, b0: f64) -> bool {
    let disc = 18.0 * b2 * b1 * b0 - 4.0 * b2.powi(3) * b0 + b2 * b2 * b1 * b1
        - 4.0 * b1.powi(3)
        - 27.0 * b0 * b0;
    disc < 0.0
}
