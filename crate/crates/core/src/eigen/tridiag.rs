//! Tridiagonal linear algebra: pivoted LU solves, inverse iteration with
//! two-sided Rayleigh quotients, resolvent diagonal traces, and a
//! double-double refinement stage for branch eigenvalues.

use crate::dd::{Cdd, Dd};
use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::matrix::TruncatedMatrix;
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar abstraction shared by the f64-complex and dd-complex solvers.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn mag2(self) -> f64;
    fn scale(self, s: f64) -> Self;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn mag2(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Scalar for Cdd {
    fn zero() -> Self {
        Cdd::ZERO
    }
    fn mag2(self) -> f64 {
        self.norm_sqr().to_f64()
    }
    fn scale(self, s: f64) -> Self {
        Cdd {
            re: self.re * Dd::from_f64(s),
            im: self.im * Dd::from_f64(s),
        }
    }
}

/// LU factorization with partial pivoting of a tridiagonal matrix
/// (one extra super-diagonal of fill-in).
pub struct TriLu<S> {
    n: usize,
    dl: Vec<S>,
    d: Vec<S>,
    du: Vec<S>,
    du2: Vec<S>,
    swapped: Vec<bool>,
}

impl<S: Scalar> TriLu<S> {
    pub fn factor(diag: &[S], sup: &[S], sub: &[S]) -> Self {
        let n = diag.len();
        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![S::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].mag2() >= dl[i].mag2() {
                if d[i].mag2() > 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] = d[i + 1] - fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                swapped[i] = true;
            }
        }
        TriLu { n, dl, d, du, du2, swapped }
    }

    /// Solve in place; returns false when a pivot is exactly zero.
    pub fn solve(&self, b: &mut [S]) -> bool {
        let n = self.n;
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.dl[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            if self.d[i].mag2() == 0.0 {
                return false;
            }
            let mut acc = b[i];
            if i + 1 < n {
                acc = acc - self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                acc = acc - self.du2[i] * b[i + 2];
            }
            b[i] = acc / self.d[i];
        }
        true
    }
}

fn norm2<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.mag2()).sum::<f64>().sqrt()
}

fn normalize<S: Scalar>(v: &mut [S]) -> f64 {
    let nrm = norm2(v);
    if nrm > 0.0 {
        let inv = 1.0 / nrm;
        for x in v.iter_mut() {
            *x = x.scale(inv);
        }
    }
    nrm
}

/// Generic tridiagonal container used by the refinement paths.
pub struct Tri<S> {
    pub diag: Vec<S>,
    pub sup: Vec<S>,
    pub sub: Vec<S>,
}

impl<S: Scalar> Tri<S> {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[S], y: &mut [S]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc = acc + self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc = acc + self.sup[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    fn shifted(&self, mu: S) -> (Vec<S>, Vec<S>, Vec<S>) {
        let d: Vec<S> = self.diag.iter().map(|&q| q - mu).collect();
        (d, self.sup.clone(), self.sub.clone())
    }

    fn transposed_shifted(&self, mu: S) -> (Vec<S>, Vec<S>, Vec<S>) {
        let d: Vec<S> = self.diag.iter().map(|&q| q - mu).collect();
        (d, self.sub.clone(), self.sup.clone())
    }

    /// One inverse-iteration sweep: v <- (A - mu)^{-1} v, normalized.
    fn inverse_step(&self, mu: S, v: &mut [S]) -> bool {
        let (d, su, sb) = self.shifted(mu);
        let lu = TriLu::factor(&d, &su, &sb);
        if !lu.solve(v) {
            return false;
        }
        normalize(v);
        true
    }

    fn inverse_step_transposed(&self, mu: S, u: &mut [S]) -> bool {
        let (d, su, sb) = self.transposed_shifted(mu);
        let lu = TriLu::factor(&d, &su, &sb);
        if !lu.solve(u) {
            return false;
        }
        normalize(u);
        true
    }

    /// Two-sided Rayleigh quotient u^T A v / u^T v (plain transpose, no
    /// conjugation: stationary for the left/right eigenvector pair).
    fn rayleigh(&self, u: &[S], v: &[S]) -> Option<S> {
        let n = self.dim();
        let mut av = vec![S::zero(); n];
        self.apply(v, &mut av);
        let mut num = S::zero();
        let mut den = S::zero();
        for i in 0..n {
            num = num + u[i] * av[i];
            den = den + u[i] * v[i];
        }
        if den.mag2() < 1e-24 {
            return None;
        }
        Some(num / den)
    }

    /// Relative residual ||(A - mu) v|| / ||v|| against the local row scale.
    fn residual(&self, mu: S, v: &[S]) -> f64 {
        let n = self.dim();
        let mut av = vec![S::zero(); n];
        self.apply(v, &mut av);
        let mut r2 = 0.0;
        for i in 0..n {
            let ri = av[i] - mu * v[i];
            r2 += ri.mag2();
        }
        r2.sqrt() / norm2(v).max(1e-300)
    }
}

impl Tri<Complex64> {
    pub fn from_truncated(m: &TruncatedMatrix) -> Self {
        Tri {
            diag: m.diag.iter().map(|&q| Complex64::new(q, 0.0)).collect(),
            sup: m.sup.clone(),
            sub: m.sub.clone(),
        }
    }
}

/// Double-double section of the pencil at parameter z.
pub fn tri_dd(family: &OperatorFamily, z: Complex64, n: usize) -> Tri<Cdd> {
    let zd = Cdd::from_c64(z);
    let diag: Vec<Cdd> = (1..=n as u32)
        .map(|k| Cdd::new(family.q_dd(k), Dd::ZERO))
        .collect();
    let sup: Vec<Cdd> = (1..n as u32)
        .map(|k| zd * Cdd::new(family.b_dd(k), Dd::ZERO))
        .collect();
    let sub: Vec<Cdd> = (1..n as u32)
        .map(|k| zd * Cdd::new(family.c_dd(k), Dd::ZERO))
        .collect();
    Tri { diag, sup, sub }
}

/// A branch eigenvalue refined to double-double accuracy.
#[derive(Debug, Clone, Copy)]
pub struct RefinedEigenvalue {
    pub value: Complex64,
    pub value_dd: Cdd,
    /// Residual of the dd eigenpair, relative to the vector norm.
    pub residual: f64,
}

/// Refine the eigenvalue of the truncated pencil nearest `target`,
/// starting inverse iteration at the basis site whose diagonal entry is
/// closest to the target. f64 stage first, then two double-double sweeps
/// with a dd Rayleigh quotient.
pub fn refine_eigenvalue(
    family: &OperatorFamily,
    z: Complex64,
    n_trunc: usize,
    target: Complex64,
) -> Result<RefinedEigenvalue> {
    let m = crate::matrix::truncate(family, z, n_trunc)?;
    let tri = Tri::from_truncated(&m);
    let n = tri.dim();

    // Start site: diagonal entry nearest the target.
    let mut site = 0usize;
    let mut best = f64::INFINITY;
    for (i, &q) in m.diag.iter().enumerate() {
        let d = (Complex64::new(q, 0.0) - target).norm();
        if d < best {
            best = d;
            site = i;
        }
    }

    let mut v = vec![Complex64::zero(); n];
    v[site] = Complex64::new(1.0, 0.0);
    let mut u = v.clone();
    let symmetric = m.sup == m.sub;

    let mut mu = target;
    let mut converged = false;
    for iter in 0..40 {
        if !tri.inverse_step(mu, &mut v) {
            // exactly singular shift: the shift IS the eigenvalue
            converged = true;
            break;
        }
        if symmetric {
            u.copy_from_slice(&v);
        } else if !tri.inverse_step_transposed(mu, &mut u) {
            converged = true;
            break;
        }
        if iter >= 1 {
            if let Some(rq) = tri.rayleigh(&u, &v) {
                mu = rq;
            }
        }
        let res = tri.residual(mu, &v);
        let scale = m.diag[site].abs().max(1.0) + z.norm() * 2.0;
        if res <= 1e-13 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        // accept if the residual is still decent, otherwise report
        let res = tri.residual(mu, &v);
        let scale = m.diag[site].abs().max(1.0);
        if res > 1e-8 * scale {
            return Err(Error::NoConvergence { dim: n });
        }
    }

    // Double-double stage.
    let tdd = tri_dd(family, z, n_trunc);
    let mut vd: Vec<Cdd> = v.iter().map(|&x| Cdd::from_c64(x)).collect();
    let mut ud: Vec<Cdd> = u.iter().map(|&x| Cdd::from_c64(x)).collect();
    let mut mud = Cdd::from_c64(mu);
    for _ in 0..3 {
        if !tdd.inverse_step(mud, &mut vd) {
            break;
        }
        if symmetric {
            ud.copy_from_slice(&vd);
        } else if !tdd.inverse_step_transposed(mud, &mut ud) {
            break;
        }
        if let Some(rq) = tdd.rayleigh(&ud, &vd) {
            mud = rq;
        }
    }
    let residual = tdd.residual(mud, &vd);
    Ok(RefinedEigenvalue {
        value: mud.to_c64(),
        value_dd: mud,
        residual,
    })
}

/// Unit-vector residual of (lambda, v-from-inverse-iteration) used to
/// certify eigenvalues reported by the dense QR path.
pub fn certify_residual(m: &TruncatedMatrix, lambda: Complex64) -> f64 {
    let tri = Tri::from_truncated(m);
    let n = tri.dim();
    let mut site = 0usize;
    let mut best = f64::INFINITY;
    for (i, &q) in m.diag.iter().enumerate() {
        let d = (Complex64::new(q, 0.0) - lambda).norm();
        if d < best {
            best = d;
            site = i;
        }
    }
    let mut v = vec![Complex64::zero(); n];
    v[site] = Complex64::new(1.0, 0.0);
    for _ in 0..2 {
        if !tri.inverse_step(lambda, &mut v) {
            return 0.0; // exactly singular: lambda is an eigenvalue
        }
    }
    tri.residual(lambda, &v)
}

/// Trace of (lambda - A)^{-1} via the forward/backward pivot recurrences,
/// together with the smallest pivot magnitude seen (a proximity alarm for
/// contours passing near the spectrum).
pub fn resolvent_trace(m: &TruncatedMatrix, lambda: Complex64) -> (Complex64, f64) {
    let n = m.dim;
    let mm: Vec<Complex64> = m.diag.iter().map(|&q| lambda - q).collect();
    // off-diagonals of (lambda - A) are -sup, -sub; their product is sup*sub
    let mut d = vec![Complex64::zero(); n];
    let mut e = vec![Complex64::zero(); n];
    let mut min_piv = f64::INFINITY;
    d[0] = mm[0];
    min_piv = min_piv.min(d[0].norm());
    for i in 1..n {
        d[i] = mm[i] - m.sub[i - 1] * m.sup[i - 1] / d[i - 1];
        min_piv = min_piv.min(d[i].norm());
    }
    e[n - 1] = mm[n - 1];
    min_piv = min_piv.min(e[n - 1].norm());
    for i in (0..n - 1).rev() {
        e[i] = mm[i] - m.sup[i] * m.sub[i] / e[i + 1];
        min_piv = min_piv.min(e[i].norm());
    }
    let mut trace = Complex64::zero();
    for i in 0..n {
        let den = d[i] + e[i] - mm[i];
        min_piv = min_piv.min(den.norm());
        trace += den.finv();
    }
    (trace, min_piv)
}
