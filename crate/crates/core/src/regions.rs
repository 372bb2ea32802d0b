//! Localization geometry: the z-disk Delta_n, the spectral strip H_n, the
//! disk K_n, the counting window W_n, the vertical line h_n, and the
//! resolvent-norm bounds that drive eigenvalue counting.
//!
//! Boundary conventions follow the strict/non-strict inequalities of the
//! underlying counting arguments: K_n and W_n are open, H_n, Delta_n and
//! Pi(n, s) are closed.

use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use num_complex::Complex64;

/// Region selector for membership tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Closed z-disk |z| <= R_n.
    Delta,
    /// Closed strip n^2 - n <= Re(lambda) <= n^2 + n.
    StripH,
    /// Open disk |lambda - n^2| < n.
    DiskK,
    /// Open rectangle -n < Re(lambda) < n^2 + n, |Im(lambda)| < n.
    WindowW,
    /// Vertical line Re(lambda) = n^2 + n.
    LineH,
    /// Closed rectangle |Re(lambda) - n^2| <= n, |Im(lambda)| <= s.
    RectPi { s: f64 },
}

/// Localization regions attached to index n of a family.
#[derive(Debug, Clone)]
pub struct Regions {
    pub n: u32,
    growth_m: f64,
    growth_alpha: f64,
}

impl Regions {
    pub fn new(family: &OperatorFamily, n: u32) -> Self {
        Regions {
            n,
            growth_m: family.growth_m(),
            growth_alpha: family.growth_alpha(),
        }
    }

    /// R_n = n^(1-alpha) / (8M), exactly as the certificate dictates.
    pub fn radius(&self) -> f64 {
        (self.n as f64).powf(1.0 - self.growth_alpha) / (8.0 * self.growth_m)
    }

    pub fn contains(&self, point: Complex64, which: Region) -> bool {
        let n = self.n as f64;
        let n2 = n * n;
        match which {
            Region::Delta => point.norm() <= self.radius(),
            Region::StripH => (n2 - n..=n2 + n).contains(&point.re),
            Region::DiskK => (point - n2).norm() < n,
            Region::WindowW => {
                point.re > -n && point.re < n2 + n && point.im.abs() < n
            }
            Region::LineH => point.re == n2 + n,
            Region::RectPi { s } => (point.re - n2).abs() <= n && point.im.abs() <= s,
        }
    }
}

/// Upper bound on ||B R^0_lambda|| for lambda in H_n \ K_n, returning the
/// minimum of the applicable estimates:
/// 2M max(2, 2^alpha) n^(alpha-1) for any Im(lambda);
/// 2M max(2, 2^alpha) n^alpha / |t| when n <= |t| <= n^2;
/// 4M 2^alpha |t|^((alpha-2)/2) when |t| >= n^2  (t = Im lambda).
pub fn resolvent_norm_bound(
    family: &OperatorFamily,
    n: u32,
    lambda: Complex64,
) -> Result<f64> {
    if !family.has_square_diagonal() {
        return Err(Error::InvalidFamily(
            "resolvent bounds hold for the q_k = k^2 diagonal only".into(),
        ));
    }
    let regions = Regions::new(family, n);
    if !regions.contains(lambda, Region::StripH) || regions.contains(lambda, Region::DiskK) {
        return Err(Error::LambdaOutsideDomain(lambda, n));
    }
    let m = family.growth_m();
    let alpha = family.growth_alpha();
    let nf = n as f64;
    let t = lambda.im.abs();
    let coef = 2.0 * m * 2.0f64.max(2.0f64.powf(alpha));
    let mut bound = coef * nf.powf(alpha - 1.0);
    if t >= nf && t <= nf * nf {
        bound = bound.min(coef * nf.powf(alpha) / t);
    }
    if t >= nf * nf {
        bound = bound.min(4.0 * m * 2.0f64.powf(alpha) * t.powf((alpha - 2.0) / 2.0));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Alpha;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power(alpha: Alpha) -> OperatorFamily {
        OperatorFamily::power(alpha).unwrap()
    }

    /// Brute-force sup_k (|b_k| + |c_{k-1}|) / |lambda - k^2| over k <= cap,
    /// with the cap chosen large enough that the k > cap tail is dominated
    /// by the last term (the ratio decays like k^(alpha-2)).
    fn brute_norm(family: &OperatorFamily, lambda: Complex64, cap: u32) -> f64 {
        let mut sup: f64 = 0.0;
        for k in 1..=cap {
            let num = family.b(k).abs() + family.c(k - 1).abs();
            let den = (lambda - (k as f64) * (k as f64)).norm();
            sup = sup.max(num / den);
        }
        sup
    }

    #[test]
    fn bound_example_alpha_zero() {
        // n = 10, lambda = 110 on the K_n boundary: 2 * 1 * 2 * 10^-1 = 0.4
        let fam = power(Alpha::Rational(0, 1));
        let b = resolvent_norm_bound(&fam, 10, c(110.0, 0.0)).unwrap();
        assert!((b - 0.4).abs() < 1e-15);
    }

    #[test]
    fn bound_example_alpha_half() {
        // n = 4, lambda = 12 on the K_4 boundary: 2 * 2 * 4^{-1/2} = 2
        let fam = power(Alpha::Rational(1, 2));
        let b = resolvent_norm_bound(&fam, 4, c(12.0, 0.0)).unwrap();
        assert!((b - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_lambda_outside_domain() {
        let fam = power(Alpha::Rational(0, 1));
        // inside K_5
        assert!(matches!(
            resolvent_norm_bound(&fam, 5, c(25.0, 0.0)),
            Err(Error::LambdaOutsideDomain(..))
        ));
        // outside H_5
        assert!(matches!(
            resolvent_norm_bound(&fam, 5, c(50.0, 0.0)),
            Err(Error::LambdaOutsideDomain(..))
        ));
    }

    #[test]
    fn bound_dominates_brute_force_on_boundaries() {
        for alpha in [Alpha::Rational(0, 1), Alpha::Rational(1, 2), Alpha::Real(0.3)] {
            let fam = power(alpha);
            for n in [3u32, 5, 10] {
                let nf = n as f64;
                let n2 = nf * nf;
                // Points on the K_n circle (excluding the open interior).
                for j in 0..24 {
                    let th = 2.0 * std::f64::consts::PI * j as f64 / 24.0;
                    let lam = c(n2 + nf * th.cos(), nf * th.sin());
                    if !(lam.re >= n2 - nf && lam.re <= n2 + nf) {
                        continue;
                    }
                    // nudge outward so the open-disk test cannot reject
                    let lam = c(n2, 0.0) + (lam - c(n2, 0.0)) * 1.000001;
                    if !(lam.re >= n2 - nf && lam.re <= n2 + nf) {
                        continue; // nudge left the closed strip at the extremes
                    }
                    let bound = resolvent_norm_bound(&fam, n, lam).unwrap();
                    let brute = brute_norm(&fam, lam, 10_000);
                    assert!(
                        brute <= bound * (1.0 + 1e-12),
                        "alpha={:?} n={} lam={} brute={} bound={}",
                        alpha,
                        n,
                        lam,
                        brute,
                        bound
                    );
                }
                // Points on the Pi(n, n+2) rectangle boundary within H_n.
                let s = nf + 2.0;
                for j in 0..=16 {
                    let im = -s + 2.0 * s * j as f64 / 16.0;
                    for re in [n2 - nf, n2 + nf] {
                        let lam = c(re, im);
                        let bound = resolvent_norm_bound(&fam, n, lam).unwrap();
                        let brute = brute_norm(&fam, lam, 10_000);
                        assert!(brute <= bound * (1.0 + 1e-12));
                    }
                }
                for re_frac in 0..=8 {
                    let re = (n2 - nf) + 2.0 * nf * re_frac as f64 / 8.0;
                    for im in [-s, s] {
                        let lam = c(re, im);
                        let bound = resolvent_norm_bound(&fam, n, lam).unwrap();
                        let brute = brute_norm(&fam, lam, 10_000);
                        assert!(brute <= bound * (1.0 + 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn region_membership_examples() {
        let fam = power(Alpha::Rational(0, 1));
        let r3 = Regions::new(&fam, 3);
        assert!(r3.contains(c(9.0, 0.0), Region::DiskK)); // center
        assert!(r3.contains(c(0.0, 0.0), Region::Delta)); // |0| <= R_3

        let r5 = Regions::new(&fam, 5);
        let lam = c(30.0, 0.0); // 25 + 5
        assert!(r5.contains(lam, Region::StripH)); // closed boundary
        assert!(!r5.contains(lam, Region::DiskK)); // open boundary
        assert!(r5.contains(lam, Region::LineH));
    }

    #[test]
    fn k_disk_sits_inside_strip_and_window() {
        let fam = power(Alpha::Rational(1, 2));
        for n in 1..=12u32 {
            let reg = Regions::new(&fam, n);
            let n2 = (n * n) as f64;
            for j in 0..32 {
                let th = 2.0 * std::f64::consts::PI * j as f64 / 32.0;
                let lam = c(n2 + 0.999 * n as f64 * th.cos(), 0.999 * n as f64 * th.sin());
                assert!(reg.contains(lam, Region::DiskK));
                assert!(reg.contains(lam, Region::StripH));
            }
            // first n disks K_m lie in the closure of W_n
            let w = Regions::new(&fam, n);
            for m in 1..=n {
                let m2 = (m * m) as f64;
                for j in 0..16 {
                    let th = 2.0 * std::f64::consts::PI * j as f64 / 16.0;
                    let lam = c(m2 + 0.999 * m as f64 * th.cos(), 0.999 * m as f64 * th.sin());
                    assert!(
                        w.contains(lam, Region::WindowW),
                        "K_{m} not inside W_{n} at {lam}"
                    );
                }
            }
        }
    }

    #[test]
    fn delta_disks_nest_for_alpha_below_one() {
        let fam = power(Alpha::Real(0.7));
        for n in 1..=50 {
            assert!(fam.radius(n) <= fam.radius(n + 1));
        }
    }
}
