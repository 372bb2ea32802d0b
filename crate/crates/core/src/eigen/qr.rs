//! Shifted QR iteration for complex Hessenberg matrices, used on
//! tridiagonal sections (a tridiagonal matrix is upper Hessenberg; the
//! iteration preserves Hessenberg form while filling the upper triangle).

use crate::error::{Error, Result};
use crate::matrix::TruncatedMatrix;
use num_complex::Complex64;

/// Dense row-major upper-Hessenberg workspace.
pub struct HessWorkspace {
    n: usize,
    a: Vec<Complex64>,
}

impl HessWorkspace {
    pub fn from_tridiagonal(m: &TruncatedMatrix) -> Self {
        let n = m.dim;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = Complex64::new(m.diag[i], 0.0);
            if i + 1 < n {
                a[i * n + i + 1] = m.sup[i];
                a[(i + 1) * n + i] = m.sub[i];
            }
        }
        HessWorkspace { n, a }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }
}

/// Unitary 2x2 [[c, s], [-conj(s), conj(c)]] with [c s; .] [x; y] = [r; 0].
#[inline]
fn givens(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let nx = x.norm();
    let ny = y.norm();
    if ny == 0.0 {
        return (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    }
    if nx == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    }
    let r = (nx * nx + ny * ny).sqrt();
    (x.conj() / r, y.conj() / r)
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    (half + disc, half - disc)
}

const MAX_SWEEPS_PER_EIGENVALUE: usize = 40;

/// All eigenvalues of the Hessenberg matrix, unordered.
pub fn eigenvalues(h: &mut HessWorkspace) -> Result<Vec<Complex64>> {
    let n = h.n;
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }
    let mut hi = n - 1;
    let mut stagnation = 0usize;
    let mut total_budget = MAX_SWEEPS_PER_EIGENVALUE * n + 100;

    'outer: loop {
        // Deflate converged subdiagonals from the bottom of the active block.
        loop {
            if hi == 0 {
                eigs.push(h.at(0, 0));
                break 'outer;
            }
            let sub = h.at(hi, hi - 1).norm();
            let scale = h.at(hi - 1, hi - 1).norm() + h.at(hi, hi).norm();
            if sub <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                eigs.push(h.at(hi, hi));
                hi -= 1;
                stagnation = 0;
            } else {
                break;
            }
        }

        // Find the top of the active block [lo..=hi].
        let mut lo = hi;
        while lo > 0 {
            let sub = h.at(lo, lo - 1).norm();
            let scale = h.at(lo - 1, lo - 1).norm() + h.at(lo, lo).norm();
            if sub <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }

        if hi - lo == 1 {
            let (e1, e2) = eig2(h.at(lo, lo), h.at(lo, hi), h.at(hi, lo), h.at(hi, hi));
            eigs.push(e1);
            eigs.push(e2);
            if lo == 0 {
                break 'outer;
            }
            hi = lo - 1;
            stagnation = 0;
            continue;
        }

        if total_budget == 0 {
            return Err(Error::NoConvergence { dim: n });
        }
        total_budget -= 1;

        // Wilkinson shift: trailing 2x2 eigenvalue closer to h[hi][hi].
        let (e1, e2) = eig2(
            h.at(hi - 1, hi - 1),
            h.at(hi - 1, hi),
            h.at(hi, hi - 1),
            h.at(hi, hi),
        );
        let corner = h.at(hi, hi);
        let mut mu = if (e1 - corner).norm() <= (e2 - corner).norm() { e1 } else { e2 };
        stagnation += 1;
        if stagnation.is_multiple_of(12) {
            // exceptional shift to break symmetry-induced stalls
            let d = h.at(hi, hi - 1).norm() + if hi >= 2 { h.at(hi - 1, hi - 2).norm() } else { 0.0 };
            mu = corner + Complex64::new(0.75 * d, -0.25 * d);
        }

        // Implicit single-shift sweep over [lo..=hi].
        let mut x = h.at(lo, lo) - mu;
        let mut y = h.at(lo + 1, lo);
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let cc = c.conj();
            let sc = s.conj();
            // Left rotation on rows k, k+1 (columns from the bulge onward).
            let jstart = if k > lo { k - 1 } else { lo };
            for j in jstart..=hi {
                let t1 = h.at(k, j);
                let t2 = h.at(k + 1, j);
                h.set(k, j, c * t1 + s * t2);
                h.set(k + 1, j, -sc * t1 + cc * t2);
            }
            // Right rotation on columns k, k+1.
            let iend = (k + 2).min(hi);
            for i in lo..=iend {
                let t1 = h.at(i, k);
                let t2 = h.at(i, k + 1);
                h.set(i, k, t1 * cc + t2 * sc);
                h.set(i, k + 1, -t1 * s + t2 * c);
            }
            if k + 2 <= hi {
                x = h.at(k + 1, k);
                y = h.at(k + 2, k);
            }
        }
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Alpha, OperatorFamily};
    use crate::matrix::truncate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn diagonal_matrix_is_immediate() {
        let fam = OperatorFamily::power(Alpha::Rational(0, 1)).unwrap();
        let m = truncate(&fam, c(0.0, 0.0), 5).unwrap();
        let mut h = HessWorkspace::from_tridiagonal(&m);
        let eigs = sorted(eigenvalues(&mut h).unwrap());
        let expect = [1.0, 4.0, 9.0, 16.0, 25.0];
        for (e, x) in eigs.iter().zip(expect) {
            assert!((e - x).norm() < 1e-14);
        }
    }

    #[test]
    fn two_by_two_exact() {
        // [[1, z], [z, 4]] at z = i: eigenvalues 2.5 +- sqrt(2.25 - 1)
        let fam = OperatorFamily::power(Alpha::Rational(0, 1)).unwrap();
        let m = truncate(&fam, c(0.0, 1.0), 2).unwrap();
        let mut h = HessWorkspace::from_tridiagonal(&m);
        let eigs = sorted(eigenvalues(&mut h).unwrap());
        let d = (2.25f64 - 1.0).sqrt();
        assert!((eigs[0] - c(2.5 - d, 0.0)).norm() < 1e-14);
        assert!((eigs[1] - c(2.5 + d, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn trace_and_realness_invariants() {
        // For b = c and real z the matrix is similar to a real symmetric one.
        let fam = OperatorFamily::power(Alpha::Rational(1, 2)).unwrap();
        let m = truncate(&fam, c(0.7, 0.0), 50).unwrap();
        let trace_expect: f64 = m.diag.iter().sum();
        let mut h = HessWorkspace::from_tridiagonal(&m);
        let eigs = eigenvalues(&mut h).unwrap();
        assert_eq!(eigs.len(), 50);
        let tr: Complex64 = eigs.iter().sum();
        assert!((tr.re - trace_expect).abs() < 1e-9 * trace_expect);
        assert!(tr.im.abs() < 1e-9 * trace_expect);
        for e in &eigs {
            assert!(e.im.abs() < 1e-10, "spectrum should be real, got {e}");
        }
    }

    #[test]
    fn complex_z_trace_invariant() {
        let fam = OperatorFamily::power(Alpha::Rational(1, 2)).unwrap();
        let z = c(0.4, 0.9);
        let m = truncate(&fam, z, 64).unwrap();
        let trace_expect: f64 = m.diag.iter().sum();
        let mut h = HessWorkspace::from_tridiagonal(&m);
        let eigs = eigenvalues(&mut h).unwrap();
        let tr: Complex64 = eigs.iter().sum();
        assert!((tr - trace_expect).norm() < 1e-9 * trace_expect);
    }
}
