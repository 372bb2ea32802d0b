//! Composite Gauss-Legendre quadrature on segments in the complex plane,
//! with adaptive bisection. Used for boundary integrals of resolvent traces.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

const GL_ORDER: usize = 16;

/// Nodes and weights of 16-point Gauss-Legendre on [-1, 1], computed once
/// by Newton iteration on the Legendre polynomial.
fn gl16() -> &'static [(f64, f64); GL_ORDER] {
    static CACHE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            // Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            out[n - 1 - i] = (x, w);
        }
        out
    })
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl_segment<F>(f: &mut F, a: Complex64, b: Complex64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in gl16().iter() {
        acc += f(mid + half * x)? * w;
    }
    Ok(acc * half)
}

/// Integrate f along the straight segment a -> b, bisecting until two
/// refinement levels agree to `tol` (absolute, against the running value).
pub fn integrate_segment<F>(
    f: &mut F,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    fn recurse<F>(
        f: &mut F,
        a: Complex64,
        b: Complex64,
        whole: Complex64,
        tol: f64,
        depth: usize,
    ) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        let mid = (a + b) * 0.5;
        let left = gl_segment(f, a, mid)?;
        let right = gl_segment(f, mid, b)?;
        let refined = left + right;
        let err = (refined - whole).norm();
        if err <= tol || depth >= 12 {
            if err > tol {
                return Err(Error::QuadratureFailure { last_err: err });
            }
            return Ok(refined);
        }
        let l = recurse(f, a, mid, left, tol * 0.5, depth + 1)?;
        let r = recurse(f, mid, b, right, tol * 0.5, depth + 1)?;
        Ok(l + r)
    }
    let whole = gl_segment(f, a, b)?;
    recurse(f, a, b, whole, tol, 0)
}
