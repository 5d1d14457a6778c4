//! Small dense matrices: symmetric eigenvalues by cyclic Jacobi rotations,
//! Cholesky factorization, symmetric-definite pencils, and characteristic
//! polynomials.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

pub type Mat<const N: usize> = [[f64; N]; N];

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_SWEEPS: usize = 100;

pub fn zeros<const N: usize>() -> Mat<N> {
    [[0.0; N]; N]
}

pub fn identity<const N: usize>() -> Mat<N> {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn transpose<const N: usize>(a: &Mat<N>) -> Mat<N> {
    let mut t = zeros();
    for i in 0..N {
        for j in 0..N {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn matmul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut c = zeros();
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            for j in 0..N {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn matvec<const N: usize>(a: &Mat<N>, x: &[f64; N]) -> [f64; N] {
    let mut y = [0.0; N];
    for i in 0..N {
        y[i] = (0..N).map(|j| a[i][j] * x[j]).sum();
    }
    y
}

pub fn add<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut c = *a;
    for i in 0..N {
        for j in 0..N {
            c[i][j] += b[i][j];
        }
    }
    c
}

pub fn scale<const N: usize>(a: &Mat<N>, s: f64) -> Mat<N> {
    let mut c = *a;
    for row in c.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    c
}

/// `(a + aᵀ)/2`.
pub fn symmetrize<const N: usize>(a: &Mat<N>) -> Mat<N> {
    let mut s = zeros();
    for i in 0..N {
        for j in 0..N {
            s[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
    }
    s
}

pub fn quadratic<const N: usize>(m: &Mat<N>, x: &[f64; N]) -> f64 {
    let mx = matvec(m, x);
    x.iter().zip(mx.iter()).map(|(a, b)| a * b).sum()
}

fn frobenius<const N: usize>(a: &Mat<N>) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Eigenvalues of a symmetric matrix, ascending.
///
/// Only the upper triangle is trusted; the input is symmetrized first.
pub fn sym_eigenvalues<const N: usize>(m: &Mat<N>) -> Result<[f64; N]> {
    let mut a = symmetrize(m);
    let scale = frobenius(&a);
    if !scale.is_finite() {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    if scale == 0.0 {
        return Ok([0.0; N]);
    }
    let mut converged = false;
    for _ in 0..JACOBI_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (i + 1..N).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Numerical(
            "Jacobi eigenvalue iteration did not converge".into(),
        ));
    }
    let mut ev = [0.0; N];
    for i in 0..N {
        ev[i] = a[i][i];
    }
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(ev)
}

/// Lower-triangular `L` with `L Lᵀ = m`. Fails unless `m` is positive definite.
pub fn cholesky<const N: usize>(m: &Mat<N>) -> Result<Mat<N>> {
    let mut l = zeros::<N>();
    for i in 0..N {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if !(d > 0.0) {
                    return Err(Error::Numerical("matrix is not positive definite".into()));
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

fn lower_inverse<const N: usize>(l: &Mat<N>) -> Mat<N> {
    let mut inv = zeros::<N>();
    for col in 0..N {
        for i in 0..N {
            let rhs = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (0..i).map(|k| l[i][k] * inv[k][col]).sum();
            inv[i][col] = (rhs - s) / l[i][i];
        }
    }
    inv
}

/// Eigenvalues μ of the pencil `a x = μ b x`, ascending, for symmetric `a` and
/// symmetric positive definite `b`. Reduced to `L⁻¹ a L⁻ᵀ` with `b = L Lᵀ`.
pub fn generalized_sym_eigenvalues<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Result<[f64; N]> {
    let l = cholesky(&symmetrize(b))?;
    let li = lower_inverse(&l);
    let reduced = matmul(&matmul(&li, &symmetrize(a)), &transpose(&li));
    sym_eigenvalues(&reduced)
}

/// Coefficients of `det(zI − a)` below the leading one, highest power first:
/// the `k`-th is `(−1)^k` times the sum of the `k×k` principal minors.
///
/// Minors are expanded by cofactors, which avoids the cancellation of trace
/// recursions when entries differ by many orders of magnitude. Intended for
/// small `N`.
pub fn characteristic_polynomial<const N: usize>(a: &Mat<N>) -> [f64; N] {
    let mut coeffs = [0.0; N];
    for mask in 1usize..(1 << N) {
        let idx: Vec<usize> = (0..N).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| a[i][j]).collect())
            .collect();
        let k = idx.len();
        let minor = cofactor_det(&sub);
        coeffs[k - 1] += if k.is_multiple_of(2) { minor } else { -minor };
    }
    coeffs
}

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0.0)
            .map(|j| {
                let sub: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * cofactor_det(&sub)
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigenvalues_of_known_matrix() {
        // tridiag(−1, 2, −1) of size 4: 2 − 2cos(kπ/5)
        let mut m = zeros::<4>();
        for i in 0..4 {
            m[i][i] = 2.0;
            if i + 1 < 4 {
                m[i][i + 1] = -1.0;
                m[i + 1][i] = -1.0;
            }
        }
        let ev = sym_eigenvalues(&m).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 5.0).cos();
            assert_abs_diff_eq!(*v, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(sym_eigenvalues(&zeros::<3>()).unwrap(), [0.0; 3]);
    }

    #[test]
    fn cholesky_roundtrip_and_failure() {
        let m = [[4.0, 2.0, 0.0], [2.0, 5.0, 1.0], [0.0, 1.0, 3.0]];
        let l = cholesky(&m).unwrap();
        let back = matmul(&l, &transpose(&l));
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(back[i][j], m[i][j], epsilon = 1e-14);
            }
        }
        assert!(cholesky(&[[1.0, 2.0], [2.0, 1.0]]).is_err());
    }

    #[test]
    fn pencil_with_identity_is_plain_eigenproblem() {
        let a = [[2.0, 1.0], [1.0, 2.0]];
        let ev = generalized_sym_eigenvalues(&a, &identity()).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-14);
        let b = [[2.0, 0.0], [0.0, 4.0]];
        let ev = generalized_sym_eigenvalues(&[[1.0, 0.0], [0.0, 1.0]], &b).unwrap();
        assert_abs_diff_eq!(ev[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn companion_characteristic_polynomial() {
        // companion of z³ + 2z² + z + 3
        let a = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-3.0, -1.0, -2.0]];
        let c = characteristic_polynomial(&a);
        assert_abs_diff_eq!(c[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[2], 3.0, epsilon = 1e-14);
    }
}
