//! One-dimensional maximization helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // the midpoint can lose to an interior probe on a kink
    [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold(
            (x, fx),
            |best, cand| if cand.1 > best.1 { cand } else { best },
        )
}

/// Coarse scan on `points` equispaced nodes over `[lo, hi]`, then golden
/// section inside the cell pair around the best node.
pub fn grid_then_golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(points >= 3 && hi > lo);
    let h = (hi - lo) / (points - 1) as f64;
    let (best_i, _) = (0..points).map(|i| (i, f(lo + h * i as f64))).fold(
        (0, f64::NEG_INFINITY),
        |best, cand| if cand.1 > best.1 { cand } else { best },
    );
    let a = lo + h * best_i.saturating_sub(1) as f64;
    let b = (lo + h * (best_i + 1) as f64).min(hi);
    golden_section_max(f, a, b, tol)
}

/// Index of the largest finite value.
pub fn argmax(ys: &[f64]) -> Option<usize> {
    ys.iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .fold(None, |best: Option<(usize, f64)>, (i, &y)| match best {
            Some((_, by)) if by >= y => best,
            _ => Some((i, y)),
        })
        .map(|(i, _)| i)
}

/// Location and value of the maximum of sampled data, refined by the parabola
/// through the best sample and its two neighbours. Falls back to the raw
/// sample at the ends of the grid or when the three points are collinear.
pub fn parabolic_argmax(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    assert_eq!(xs.len(), ys.len());
    let i = argmax(ys)?;
    if i == 0 || i + 1 >= xs.len() || !ys[i - 1].is_finite() || !ys[i + 1].is_finite() {
        return Some((xs[i], ys[i]));
    }
    let (x0, x1, x2) = (xs[i - 1], xs[i], xs[i + 1]);
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    if !(curv < 0.0) {
        return Some((x1, y1));
    }
    // Newton form: y = y0 + d01 (x − x0) + curv (x − x0)(x − x1)
    let xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
    let xv = xv.clamp(x0, x2);
    let yv = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
    Some((xv, yv))
}

/// `n` points from `lo` to `hi` inclusive, linearly or geometrically spaced.
pub fn grid(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if log {
                    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
                } else {
                    lo + t * (hi - lo)
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_smooth_max() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn grid_then_golden_on_kink() {
        let f = |x: f64| (2.0 * x).min(1.5 - x);
        let (x, fx) = grid_then_golden_max(f, 0.0, 3.0, 200, 1e-10);
        assert_abs_diff_eq!(x, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn parabola_recovered_exactly() {
        let xs = grid(0.0, 2.0, 11, false);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - (x - 1.234).powi(2)).collect();
        let (x, y) = parabolic_argmax(&xs, &ys).unwrap();
        assert_abs_diff_eq!(x, 1.234, epsilon = 1e-12);
        assert_abs_diff_eq!(y, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn argmax_skips_nan_and_edges() {
        assert_eq!(argmax(&[f64::NAN, 1.0, 3.0, 2.0]), Some(2));
        assert_eq!(argmax(&[f64::NAN]), None);
        assert_eq!(parabolic_argmax(&[0.0, 1.0], &[2.0, 1.0]), Some((0.0, 2.0)));
    }

    #[test]
    fn grids() {
        let g = grid(0.1, 10.0, 3, true);
        assert_abs_diff_eq!(g[1], 1.0, epsilon = 1e-15);
        assert_eq!(grid(1.0, 2.0, 1, false), vec![1.0]);
        assert_eq!(grid(0.0, 1.0, 5, false)[4], 1.0);
    }
}
