//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    simpson_rec(&f, a, b, fa, fm, fb, whole, tol, 50)
}

pub fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

/// Standard normal upper tail by direct integration of the density.
pub fn q_by_integration(x: f64) -> f64 {
    if x >= 0.0 {
        adaptive_simpson(|t| normal_pdf(t, 0.0, 1.0), x, x + 40.0, 1e-14)
    } else {
        1.0 - q_by_integration(-x)
    }
}

/// TV between `N(0, eps²)` and `N(shift, eps²)` by integrating half the
/// absolute density difference on `[-10 eps, shift + 10 eps]`, split at the
/// crossing point.
pub fn tv_by_integration(shift: f64, eps: f64) -> f64 {
    let g = |t: f64| 0.5 * (normal_pdf(t, 0.0, eps) - normal_pdf(t, shift, eps)).abs();
    let mid = 0.5 * shift;
    adaptive_simpson(g, -10.0 * eps, mid, 1e-12)
        + adaptive_simpson(g, mid, shift + 10.0 * eps, 1e-12)
}

/// Triple-loop product of row-major matrices.
pub fn naive_matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            for t in 0..k {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

/// `∏_l (1 - δ_l^{d_{l-1}})` for Dropout at every site.
pub fn dropout_product_oracle(dims: &[usize], deltas: &[f64]) -> f64 {
    dims.windows(2)
        .zip(deltas)
        .map(|(w, &d)| 1.0 - d.powi(w[0] as i32))
        .product()
}

/// Relative difference scaled to the larger magnitude.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
