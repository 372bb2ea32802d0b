//! Finite sections of the pencil L + zB.

use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use num_complex::Complex64;

/// N x N truncation of L + zB: `diag[k] = q_k`, `super[k] = z b_k`, `sub[k] = z c_k`.
#[derive(Debug, Clone)]
pub struct TruncatedMatrix {
    pub dim: usize,
    pub z: Complex64,
    pub diag: Vec<f64>,
    pub sup: Vec<Complex64>,
    pub sub: Vec<Complex64>,
}

/// Finite section of the pencil at parameter z.
pub fn truncate(family: &OperatorFamily, z: Complex64, n: usize) -> Result<TruncatedMatrix> {
    if n == 0 {
        return Err(Error::InvalidFamily("truncation dimension must be >= 1".into()));
    }
    if let Some(max_k) = family.max_k() {
        if n as u32 > max_k {
            return Err(Error::InvalidFamily(format!(
                "custom family tables cover k <= {max_k}, requested N = {n}"
            )));
        }
    }
    let diag: Vec<f64> = (1..=n as u32).map(|k| family.q(k)).collect();
    let sup: Vec<Complex64> = (1..n as u32).map(|k| z * family.b(k)).collect();
    let sub: Vec<Complex64> = (1..n as u32).map(|k| z * family.c(k)).collect();
    Ok(TruncatedMatrix { dim: n, z, diag, sup, sub })
}

impl TruncatedMatrix {
    /// y = A x.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.dim;
        for i in 0..n {
            let mut acc = x[i] * self.diag[i];
            if i > 0 {
                acc += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// An upper bound proxy for the operator norm: max row sum.
    pub fn norm_estimate(&self) -> f64 {
        let n = self.dim;
        let mut best = 0.0f64;
        for i in 0..n {
            let mut s = self.diag[i].abs();
            if i > 0 {
                s += self.sub[i - 1].norm();
            }
            if i + 1 < n {
                s += self.sup[i].norm();
            }
            best = best.max(s);
        }
        best
    }

    /// Symmetrized similarity: both off-diagonals become z sqrt(b_k c_k)
    /// (principal branch, argument in (-pi/2, pi/2]). Requires b_k c_k != 0
    /// in range; the spectrum is unchanged.
    pub fn symmetrized(family: &OperatorFamily, z: Complex64, n: usize) -> Result<TruncatedMatrix> {
        if n == 0 {
            return Err(Error::InvalidFamily("truncation dimension must be >= 1".into()));
        }
        let diag: Vec<f64> = (1..=n as u32).map(|k| family.q(k)).collect();
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for k in 1..n as u32 {
            let prod = family.b(k) * family.c(k);
            if prod == 0.0 {
                return Err(Error::InvalidFamily(format!(
                    "cannot symmetrize: b_{k} c_{k} = 0"
                )));
            }
            let root = if prod >= 0.0 {
                Complex64::new(prod.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, (-prod).sqrt())
            };
            off.push(z * root);
        }
        Ok(TruncatedMatrix { dim: n, z, diag, sup: off.clone(), sub: off })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Alpha, Parity};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_zero_is_diagonal() {
        let fam = OperatorFamily::power(Alpha::Rational(0, 1)).unwrap();
        let m = truncate(&fam, c(0.0, 0.0), 3).unwrap();
        assert_eq!(m.diag, vec![1.0, 4.0, 9.0]);
        assert!(m.sup.iter().all(|v| v.norm() == 0.0));
        assert!(m.sub.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn alpha_half_small_section() {
        let fam = OperatorFamily::power(Alpha::Rational(1, 2)).unwrap();
        let m = truncate(&fam, c(1.0, 0.0), 2).unwrap();
        // [[1, 1], [1, 4]]
        assert_eq!(m.diag, vec![1.0, 4.0]);
        assert_eq!(m.sup, vec![c(1.0, 0.0)]);
        assert_eq!(m.sub, vec![c(1.0, 0.0)]);
    }

    #[test]
    fn whittaker_hill_at_i() {
        let fam = OperatorFamily::whittaker_hill(0.0, Parity::Even).unwrap();
        let m = truncate(&fam, c(0.0, 1.0), 2).unwrap();
        assert_eq!(m.diag, vec![1.0, 4.0]);
        // b_1 = -1, c_1 = 1 at t = 0
        assert_eq!(m.sup, vec![c(0.0, -1.0)]);
        assert_eq!(m.sub, vec![c(0.0, 1.0)]);
    }

    #[test]
    fn symmetrized_preserves_diag_and_matches_bc_product() {
        // t = 2.5 keeps b_k = t - k nonzero for every integer k
        let fam = OperatorFamily::whittaker_hill(2.5, Parity::Even).unwrap();
        let z = c(0.3, 0.1);
        let m = TruncatedMatrix::symmetrized(&fam, z, 6).unwrap();
        for k in 1..6u32 {
            let prod = m.sup[(k - 1) as usize] * m.sub[(k - 1) as usize];
            let expect = z * z * fam.b(k) * fam.c(k);
            assert!((prod - expect).norm() < 1e-12 * expect.norm().max(1.0));
            // principal branch
            let a = m.sup[(k - 1) as usize] / z;
            assert!(a.arg() > -std::f64::consts::FRAC_PI_2 - 1e-15);
            assert!(a.arg() <= std::f64::consts::FRAC_PI_2 + 1e-15);
        }
    }
}
