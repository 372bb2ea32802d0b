//! Regularized traces: partial sums of branch deviations E_n(z) - q_n,
//! their entire-function limits (0 below the critical growth rate,
//! -(l/2) z^2 at it), and the l-limit detector for b_k c_k / k.
//!
//! Partial sums are accumulated in double-double arithmetic from refined
//! branch eigenvalues; the telescoped residual against phi_2, phi_4 is
//! far below f64 roundoff at the matrix scales involved.

use crate::dd::{Cdd, Dd};
use crate::eigen::tridiag::refine_eigenvalue;
use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::taylor::phi_closed;
use num_complex::Complex64;
use serde::Serialize;

/// Report of one partial-trace evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub z: [f64; 2],
    /// 0 for tr, 1 for tr_1 (a_2 z^2 subtracted per branch).
    pub order_p: u32,
    pub n_used: u32,
    pub partial_sum: [f64; 2],
    /// Entire-function limit predicted for this family, when one is known.
    pub predicted_limit: Option<[f64; 2]>,
    /// Empirical decay order: log2 of successive residual ratios.
    pub convergence_rate_estimate: f64,
}

/// The even quadratic polynomial c z^2 (the only shapes a trace limit takes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvenQuadratic {
    pub z2: f64,
}

impl EvenQuadratic {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        z * z * self.z2
    }
}

/// Estimate l = lim b_k c_k / k by Richardson extrapolation over
/// k = n_probe/2 .. n_probe.
pub fn ell_limit(family: &OperatorFamily, n_probe: u32) -> Result<f64> {
    let hi = match family.max_k() {
        Some(m) => n_probe.min(m),
        None => n_probe,
    };
    if hi < 8 {
        return Err(Error::InvalidFamily("ell probe needs at least 8 indices".into()));
    }
    let u = |k: u32| family.b(k) * family.c(k) / k as f64;
    let est = 2.0 * u(hi) - u(hi / 2);
    let est2 = 2.0 * u(hi - 1) - u((hi - 1) / 2);
    let tol = 1e-4 * (1.0 + est.abs());
    if (est - est2).abs() > tol {
        return Err(Error::NoLimit);
    }
    // short-scale oscillation check
    for k in hi - 5..hi {
        if (u(k + 1) - u(k)).abs() > 10.0 * tol {
            return Err(Error::NoLimit);
        }
    }
    Ok(est)
}

/// The entire-function value of the regularized trace as a polynomial:
/// identically 0 for alpha < 1/2, -(l/2) z^2 at alpha = 1/2.
pub fn trace_limit(family: &OperatorFamily) -> Result<EvenQuadratic> {
    let alpha = family.growth_alpha();
    if alpha > 0.5 + 1e-12 {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if alpha < 0.5 - 1e-12 {
        return Ok(EvenQuadratic { z2: 0.0 });
    }
    let probe = family.max_k().map(|m| m.min(8192)).unwrap_or(8192);
    let ell = ell_limit(family, probe)?;
    Ok(EvenQuadratic { z2: -ell / 2.0 })
}

/// Sum of refined branch deviations E_n(z) - q_n for n = 1..=upto in
/// double-double precision. The truncation margin keeps the eigenvector
/// tails of every tracked branch far inside the section.
pub(crate) fn branch_deviation_sum(
    family: &OperatorFamily,
    z: Complex64,
    upto: u32,
) -> Result<Cdd> {
    let n_trunc = upto as usize + 40 + upto as usize / 5;
    let mut acc = Cdd::ZERO;
    let mut refined: Vec<Complex64> = Vec::with_capacity(upto as usize);
    for n in 1..=upto {
        let q_n = family.q(n);
        let r = refine_eigenvalue(family, z, n_trunc, Complex64::new(q_n, 0.0))?;
        // label guard: the refined value must stay nearest its own q_n
        let gap = if n == 1 {
            family.q(2) - q_n
        } else {
            (q_n - family.q(n - 1)).min(family.q(n + 1) - q_n)
        };
        let dev = (r.value - q_n).norm();
        if dev > 0.5 * gap {
            return Err(Error::NearCollision { z, gap: gap - dev });
        }
        refined.push(r.value);
        acc = acc + (r.value_dd - Cdd::new(family.q_dd(n), Dd::ZERO));
    }
    // distinctness guard against duplicate convergence
    for i in 0..refined.len() {
        for j in i + 1..refined.len() {
            if (refined[i] - refined[j]).norm() < 1e-10 {
                return Err(Error::NearCollision { z, gap: 0.0 });
            }
        }
    }
    Ok(acc)
}

fn predicted_limit(family: &OperatorFamily, z: Complex64, p: u32) -> Option<Complex64> {
    let alpha = family.growth_alpha();
    if p == 1 {
        if alpha < 0.9 {
            return Some(Complex64::new(0.0, 0.0));
        }
        return None;
    }
    if alpha < 0.5 - 1e-12 {
        Some(Complex64::new(0.0, 0.0))
    } else if (alpha - 0.5).abs() <= 1e-12 {
        let probe = family.max_k().map(|m| m.min(8192)).unwrap_or(8192);
        ell_limit(family, probe).ok().map(|l| z * z * (-l / 2.0))
    } else {
        None
    }
}

fn partial_value(family: &OperatorFamily, z: Complex64, p: u32, n: u32) -> Result<Complex64> {
    let mut sum = branch_deviation_sum(family, z, n)?.to_c64();
    if p == 1 {
        // subtract sum a_2(m) z^2 = phi_2(n) z^2, telescoped exactly
        let phi2 = phi_closed(family, 2, n)?.to_f64();
        sum -= z * z * phi2;
    }
    Ok(sum)
}

/// Partial regularized trace sum_{m<=N} (E_m(z) - q_m - [p=1] a_2(m) z^2).
pub fn partial_trace(
    family: &OperatorFamily,
    z: Complex64,
    p: u32,
    n: u32,
) -> Result<TraceReport> {
    if p > 1 {
        return Err(Error::InvalidFamily("only trace orders p = 0, 1 are defined".into()));
    }
    if n < 4 {
        return Err(Error::InvalidFamily("partial trace needs N >= 4".into()));
    }
    let radius = family.radius(n);
    if z.norm() > radius * (1.0 + 1e-12) {
        return Err(Error::ZTooLarge { z_abs: z.norm(), radius });
    }
    let predicted = predicted_limit(family, z, p);
    let s_full = partial_value(family, z, p, n)?;
    let s_half = partial_value(family, z, p, n / 2)?;
    let s_quarter = partial_value(family, z, p, n / 4)?;
    let rate = match predicted {
        Some(lim) => {
            let d_half = (s_half - lim).norm();
            let d_full = (s_full - lim).norm();
            if d_full > 0.0 {
                (d_half / d_full).log2()
            } else {
                f64::INFINITY
            }
        }
        None => {
            let d1 = (s_half - s_quarter).norm();
            let d2 = (s_full - s_half).norm();
            if d2 > 0.0 {
                (d1 / d2).log2()
            } else {
                f64::INFINITY
            }
        }
    };
    Ok(TraceReport {
        z: [z.re, z.im],
        order_p: p,
        n_used: n,
        partial_sum: [s_full.re, s_full.im],
        predicted_limit: predicted.map(|w| [w.re, w.im]),
        convergence_rate_estimate: rate,
    })
}

/// Telescoped residual |partial_trace(N) - phi_2(N) z^2 - phi_4(N) z^4|,
/// the quantity whose decay makes the trace formula testable at desk
/// scale. Computed fully in double-double arithmetic.
pub fn telescoped_residual(family: &OperatorFamily, z: Complex64, n: u32) -> Result<f64> {
    let sum = branch_deviation_sum(family, z, n)?;
    let phi2 = phi_closed(family, 2, n)?;
    let phi4 = phi_closed(family, 4, n)?;
    let z2 = Cdd::from_c64(z) * Cdd::from_c64(z);
    let z4 = z2 * z2;
    let phi2_dd = match phi2.exact() {
        Some(r) => rat_to_cdd(r),
        None => Cdd::from_f64(phi2.to_f64()),
    };
    let phi4_dd = match phi4.exact() {
        Some(r) => rat_to_cdd(r),
        None => Cdd::from_f64(phi4.to_f64()),
    };
    let resid = sum - z2 * phi2_dd - z4 * phi4_dd;
    Ok(resid.abs().to_f64())
}

fn rat_to_cdd(r: &crate::series::Rat) -> Cdd {
    Cdd::new(crate::series::rat_to_dd(r), Dd::ZERO)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Alpha, CustomSequences};
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jc() -> OperatorFamily {
        OperatorFamily::power(Alpha::Rational(1, 2)).unwrap()
    }

    #[test]
    fn ell_limit_examples() {
        assert!((ell_limit(&jc(), 4096).unwrap() - 1.0).abs() < 1e-10);

        let seqs = CustomSequences {
            q: Arc::new(|k| (k as f64) * (k as f64)),
            b: Arc::new(|k| (2.0 * k as f64).sqrt()),
            c: Arc::new(|k| (2.0 * k as f64).sqrt()),
            max_k: None,
        };
        let fam = OperatorFamily::custom(seqs, 2.0, 0.5).unwrap();
        assert!((ell_limit(&fam, 4096).unwrap() - 2.0).abs() < 1e-10);

        let osc = CustomSequences {
            q: Arc::new(|k| (k as f64) * (k as f64)),
            b: Arc::new(|k| ((k + (k % 2) * k) as f64).sqrt()),
            c: Arc::new(|k| ((k + (k % 2) * k) as f64).sqrt()),
            max_k: None,
        };
        let fam = OperatorFamily::custom(osc, 2.0, 0.5).unwrap();
        assert!(matches!(ell_limit(&fam, 4096), Err(Error::NoLimit)));
    }

    #[test]
    fn trace_limit_shapes() {
        let below = OperatorFamily::power(Alpha::Real(0.3)).unwrap();
        assert_eq!(trace_limit(&below).unwrap(), EvenQuadratic { z2: 0.0 });
        let at = trace_limit(&jc()).unwrap();
        assert!((at.z2 + 0.5).abs() < 1e-8);
        let above = OperatorFamily::power(Alpha::Real(0.7)).unwrap();
        assert!(matches!(trace_limit(&above), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn partial_trace_at_zero_is_zero() {
        let r = partial_trace(&jc(), c(0.0, 0.0), 0, 8).unwrap();
        assert!(r.partial_sum[0].abs() < 1e-18);
        assert!(r.partial_sum[1].abs() < 1e-18);
    }

    #[test]
    fn partial_trace_alpha_half_matches_phi2() {
        // N = 40, z = 0.3: partial ~ phi_2(40) z^2 = -(40/81) * 0.09
        let r = partial_trace(&jc(), c(0.3, 0.0), 0, 40).unwrap();
        let expect = -0.09 * 40.0 / 81.0;
        assert!(
            (r.partial_sum[0] - expect).abs() < 2e-5,
            "got {}, expect {}",
            r.partial_sum[0],
            expect
        );
        let lim = r.predicted_limit.unwrap();
        assert!((lim[0] + 0.045).abs() < 1e-8);
    }

    #[test]
    fn partial_trace_alpha_zero_scale() {
        // alpha = 0, z = 0.3, N = 400: |sum| ~ z^2/(2N+1) ~ 1.12e-4
        let fam = OperatorFamily::power(Alpha::Rational(0, 1)).unwrap();
        let r = partial_trace(&fam, c(0.3, 0.0), 0, 400).unwrap();
        let mag = (r.partial_sum[0].powi(2) + r.partial_sum[1].powi(2)).sqrt();
        assert!(mag <= 1.2e-4, "|sum| = {mag:.3e}");
        assert!(mag >= 1.0e-4, "unexpectedly small: {mag:.3e}");
    }

    #[test]
    fn partial_trace_rejects_large_z() {
        assert!(matches!(
            partial_trace(&jc(), c(5.0, 0.0), 0, 8),
            Err(Error::ZTooLarge { .. })
        ));
    }

    #[test]
    fn evenness_in_z() {
        let a = partial_trace(&jc(), c(0.2, 0.1), 0, 12).unwrap();
        let b = partial_trace(&jc(), c(-0.2, -0.1), 0, 12).unwrap();
        assert!((a.partial_sum[0] - b.partial_sum[0]).abs() < 1e-12);
        assert!((a.partial_sum[1] - b.partial_sum[1]).abs() < 1e-12);
    }

    #[test]
    fn telescoped_residual_is_tiny_and_shrinks() {
        let z = c(0.3, 0.0);
        let t20 = telescoped_residual(&jc(), z, 20).unwrap();
        let t40 = telescoped_residual(&jc(), z, 40).unwrap();
        // psi-scale decay: ~ z^6 / (128 N^7)
        assert!(t20 < 1e-12, "t20 = {t20}");
        assert!(t40 < t20 / 2.0, "t20 = {t20}, t40 = {t40}");
    }

    #[test]
    fn partial_sums_stay_bounded_on_half_radius() {
        // |sum_{k<=n} E_k(z) - sum k^2| <= 2 n^2 for |z| = R_n / 2
        for n in [5u32, 10, 20, 30] {
            let r = jc().radius(n) / 2.0;
            for j in 0..4 {
                let th = std::f64::consts::PI * j as f64 / 2.0 + 0.3;
                let z = c(r * th.cos(), r * th.sin());
                let s = branch_deviation_sum(&jc(), z, n).unwrap().to_c64();
                assert!(
                    s.norm() <= 2.0 * (n * n) as f64,
                    "n={n}, z={z}: |sum| = {}",
                    s.norm()
                );
            }
        }
    }
}
