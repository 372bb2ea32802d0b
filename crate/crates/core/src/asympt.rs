//! Large-n verification harness: residuals of the second-order eigenvalue
//! expansions, log-log slope fits against the predicted decay exponents,
//! inverse-power coefficient recovery, and the radius-of-convergence probe.

use crate::dd::{Cdd, Dd};
use crate::eigen::tridiag::refine_eigenvalue;
use crate::error::{Error, Result};
use crate::family::{Alpha, OperatorFamily};
use crate::taylor::solve_branch_equation;
use num_complex::Complex64;
use serde::Serialize;

/// Default slope-fit tolerance around the predicted exponent.
pub const SLOPE_TOL: f64 = 0.35;

/// The geometric n-ladder used by the slope fits.
pub const N_LADDER: [u32; 7] = [8, 11, 16, 23, 32, 45, 64];

#[derive(Debug, Clone, Serialize)]
pub struct ResidualFit {
    pub description: String,
    pub samples: Vec<(u32, f64)>,
    pub fitted_slope: f64,
    pub fitted_intercept: f64,
    pub target_slope: f64,
    pub slope_tol: f64,
    pub pass: bool,
}

/// Branch eigenvalue for large n in double-double precision, with an
/// isolation guard against label drift.
pub fn branch_value(
    family: &OperatorFamily,
    z: Complex64,
    n: u32,
    n_trunc: usize,
) -> Result<Cdd> {
    let q_n = family.q(n);
    let r = refine_eigenvalue(family, z, n_trunc, Complex64::new(q_n, 0.0))?;
    let gap = if n == 1 {
        family.q(2) - q_n
    } else {
        (q_n - family.q(n - 1)).min(family.q(n + 1) - q_n)
    };
    if (r.value - q_n).norm() > 0.5 * gap {
        return Err(Error::NearCollision { z, gap });
    }
    Ok(r.value_dd)
}

/// Smallest index at which the branch is numerically isolated at the probe
/// z (its deviation from q_n is below a quarter of the diagonal gap).
pub fn working_floor(family: &OperatorFamily, z: Complex64, n_trunc: usize) -> u32 {
    for n in 1..=64u32 {
        if let Ok(v) = branch_value(family, z, n, n_trunc) {
            let dev = (v.to_c64() - family.q(n)).norm();
            let gap = family.q(n + 1) - family.q(n);
            if dev < 0.25 * gap {
                return n;
            }
        }
    }
    65
}

fn dd_pow(nf: f64, e: f64) -> Dd {
    Dd::powf_seed(nf, e)
}

/// Residual of the three-term second-order expansion:
/// |E_n(z) - n^2 - z^2 ((1-2a)/(2 n^(2-2a)) + (a^2-a)/n^(3-2a)
///                     + (1-2a)(8a^2-14a+3)/(24 n^(4-2a)))|.
pub fn thm2_residual(
    alpha: Alpha,
    z: Complex64,
    n: u32,
    n_trunc: usize,
) -> Result<f64> {
    let a = alpha.value();
    let family = OperatorFamily::power(alpha)?;
    let e = branch_value(&family, z, n, n_trunc)?;
    let nf = n as f64;
    let z2 = Cdd::from_c64(z * z);
    let t1 = Dd::from_f64(1.0 - 2.0 * a) / (Dd::from_f64(2.0) * dd_pow(nf, 2.0 - 2.0 * a));
    let t2 = Dd::from_f64(a * a - a) / dd_pow(nf, 3.0 - 2.0 * a);
    let t3 = Dd::from_f64((1.0 - 2.0 * a) * (8.0 * a * a - 14.0 * a + 3.0))
        / (Dd::from_f64(24.0) * dd_pow(nf, 4.0 - 2.0 * a));
    let bracket = Cdd::new(t1 + t2 + t3, Dd::ZERO);
    let dev = e - Cdd::new(family.q_dd(n), Dd::ZERO) - z2 * bracket;
    Ok(dev.abs().to_f64())
}

/// Residual of the alpha = 1/2 fourth-order form:
/// |E_n(z) - n^2 + z^2/(4n^2) + (2z^2 + 3z^4)/(32 n^4)|.
pub fn thm4_residual(z: Complex64, n: u32, n_trunc: usize) -> Result<f64> {
    let family = OperatorFamily::power(Alpha::Rational(1, 2))?;
    let e = branch_value(&family, z, n, n_trunc)?;
    let n2 = Dd::from_i64(n as i64 * n as i64);
    let z2 = Cdd::from_c64(z * z);
    let z4 = z2 * z2;
    let four_n2 = Cdd::new(n2 * Dd::from_f64(4.0), Dd::ZERO);
    let thirty_two_n4 = Cdd::new(n2 * n2 * Dd::from_f64(32.0), Dd::ZERO);
    let two = Cdd::from_f64(2.0);
    let three = Cdd::from_f64(3.0);
    let dev = e - Cdd::new(family.q_dd(n), Dd::ZERO) + z2 / four_n2
        + (two * z2 + three * z4) / thirty_two_n4;
    Ok(dev.abs().to_f64())
}

/// Ordinary least squares on (ln n, ln residual).
pub fn log_log_fit(samples: &[(u32, f64)]) -> (f64, f64) {
    let xs: Vec<f64> = samples.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, r)| r.max(1e-300).ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = num / den;
    (slope, ym - slope * xm)
}

fn make_fit(
    description: String,
    samples: Vec<(u32, f64)>,
    target_slope: f64,
) -> ResidualFit {
    let (slope, intercept) = log_log_fit(&samples);
    ResidualFit {
        description,
        samples,
        fitted_slope: slope,
        fitted_intercept: intercept,
        target_slope,
        slope_tol: SLOPE_TOL,
        pass: (slope - target_slope).abs() <= SLOPE_TOL,
    }
}

/// Slope fit of the thm2 residual over the standard n-ladder; the target
/// comes from the stated remainder exponent max(2a-5, 4a-6).
pub fn thm2_slope_fit(alpha: Alpha, z: Complex64, ns: &[u32]) -> Result<ResidualFit> {
    let a = alpha.value();
    let n_max = *ns.iter().max().unwrap();
    let n_trunc = 8 * n_max as usize;
    let mut samples = Vec::with_capacity(ns.len());
    for &n in ns {
        samples.push((n, thm2_residual(alpha, z, n, n_trunc)?));
    }
    let target = (2.0 * a - 5.0).max(4.0 * a - 6.0);
    Ok(make_fit(
        format!("second-order expansion residual, alpha={a}, z={z}"),
        samples,
        target,
    ))
}

/// Slope fit of the thm4 residual (target exponent -6).
pub fn thm4_slope_fit(z: Complex64, ns: &[u32]) -> Result<ResidualFit> {
    let n_max = *ns.iter().max().unwrap();
    let n_trunc = 8 * n_max as usize;
    let mut samples = Vec::with_capacity(ns.len());
    for &n in ns {
        samples.push((n, thm4_residual(z, n, n_trunc)?));
    }
    Ok(make_fit(
        format!("fourth-order alpha=1/2 expansion residual, z={z}"),
        samples,
        -6.0,
    ))
}

/// Recovery of the inverse-power coefficients P_k(z) by least squares.
#[derive(Debug, Clone, Serialize)]
pub struct PkRecovery {
    pub z: [f64; 2],
    pub recovered: [f64; 3],
    pub expected: [f64; 3],
    pub rel_errors: [f64; 3],
    pub condition_estimate: f64,
}

/// The first three inverse-power coefficients of the alpha = 1/2 branch
/// asymptotics: P_1 = -z^2/4, P_2 = -(2z^2+3z^4)/32, P_3 = -(z^2+5z^4)/64.
pub fn pk_expected(z: f64) -> [f64; 3] {
    let z2 = z * z;
    let z4 = z2 * z2;
    [
        -z2 / 4.0,
        -(2.0 * z2 + 3.0 * z4) / 32.0,
        -(z2 + 5.0 * z4) / 64.0,
    ]
}

/// Fit E_n(z) - n^2 against {n^-2, n^-4, n^-6} over n in [n_lo, n_hi] and
/// compare the recovered coefficients with the predicted P_k(z).
pub fn pk_expansion_check(z: f64, n_lo: u32, n_hi: u32) -> Result<PkRecovery> {
    if n_lo + 2 >= n_hi {
        return Err(Error::InvalidFamily("need a nontrivial n-range".into()));
    }
    let family = OperatorFamily::power(Alpha::Rational(1, 2))?;
    let n_trunc = 8 * n_hi as usize;
    let zc = Complex64::new(z, 0.0);
    let scale = n_lo as f64;
    // rows: y = c1 x + c2 x^2 + c3 x^3 with x = (n_lo / n)^2
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for n in n_lo..=n_hi {
        let e = branch_value(&family, zc, n, n_trunc)?;
        let y = (e - Cdd::new(family.q_dd(n), Dd::ZERO)).re.to_f64();
        let x = (scale / n as f64).powi(2);
        let row = [x, x * x, x * x * x];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let (sol, cond) = solve3(ata, atb)?;
    let mut recovered = [0.0f64; 3];
    for (k, r) in recovered.iter_mut().enumerate() {
        *r = sol[k] * scale.powi(2 * (k as i32 + 1));
    }
    let expected = pk_expected(z);
    let mut rel = [0.0f64; 3];
    for k in 0..3 {
        rel[k] = if expected[k] != 0.0 {
            ((recovered[k] - expected[k]) / expected[k]).abs()
        } else {
            recovered[k].abs()
        };
    }
    Ok(PkRecovery {
        z: [z, 0.0],
        recovered,
        expected,
        rel_errors: rel,
        condition_estimate: cond,
    })
}

/// 3x3 normal-equation solve with a Frobenius condition estimate.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Result<([f64; 3], f64)> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det == 0.0 {
        return Err(Error::IllConditionedFit { cond: f64::INFINITY });
    }
    let inv = [
        [
            (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det,
            (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det,
            (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det,
        ],
        [
            (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det,
            (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det,
            (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det,
        ],
        [
            (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det,
            (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det,
            (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det,
        ],
    ];
    let frob = |m: &[[f64; 3]; 3]| -> f64 {
        m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    };
    let cond = frob(&a) * frob(&inv);
    if cond > 1e12 {
        return Err(Error::IllConditionedFit { cond });
    }
    let mut out = [0.0f64; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += inv[i][j] * b[j];
        }
    }
    Ok((out, cond))
}

/// Radius-of-convergence probe: extrapolate |a_{2k}(n)|^(-1/2k) in 1/k.
/// Reported as an estimate, never as a theorem.
pub fn radius_probe(family: &OperatorFamily, n: u32, k_max: u32) -> Result<f64> {
    if k_max < 3 {
        return Err(Error::InvalidFamily("radius probe needs k_max >= 3".into()));
    }
    let ts = solve_branch_equation(family, n, k_max)?;
    // ln r(k) = ln r_inf + c / k; fit over the top half of the k-range
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in (k_max / 2).max(2)..=k_max {
        let a = ts.coeff_f64(k).abs();
        if a == 0.0 {
            continue;
        }
        let r_k = a.powf(-1.0 / (2.0 * k as f64));
        xs.push(1.0 / k as f64);
        ys.push(r_k.ln());
    }
    if xs.len() < 2 {
        return Err(Error::InvalidFamily("not enough nonzero coefficients".into()));
    }
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = num / den;
    Ok((ym - slope * xm).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn half() -> Alpha {
        Alpha::Rational(1, 2)
    }

    #[test]
    fn residuals_vanish_at_zero() {
        assert!(thm2_residual(half(), c(0.0, 0.0), 10, 128).unwrap() < 1e-25);
        assert!(thm4_residual(c(0.0, 0.0), 10, 128).unwrap() < 1e-25);
    }

    #[test]
    fn thm2_alpha_half_slope_is_minus_four() {
        let fit = thm2_slope_fit(half(), c(1.0, 0.0), &N_LADDER).unwrap();
        assert!(
            (fit.fitted_slope + 4.0).abs() <= SLOPE_TOL,
            "slope = {}",
            fit.fitted_slope
        );
        assert!(fit.pass);
    }

    #[test]
    fn thm2_generic_alpha_slope_matches_stated_exponent() {
        // alpha = 0.3: remainder exponent max(2a-5, 4a-6) = -4.4 is attained
        let fit = thm2_slope_fit(Alpha::Real(0.3), c(1.0, 0.0), &N_LADDER).unwrap();
        assert!(fit.pass, "slope = {} target = {}", fit.fitted_slope, fit.target_slope);
    }

    #[test]
    fn thm4_slope_is_minus_six() {
        let fit = thm4_slope_fit(c(1.0, 0.0), &N_LADDER).unwrap();
        assert!(
            fit.fitted_slope <= -5.5 && fit.fitted_slope >= -6.5,
            "slope = {}",
            fit.fitted_slope
        );
    }

    #[test]
    fn thm4_residual_scale_at_n20() {
        // residual at n = 20, z = 1 stays below 10x the predicted
        // next-order term |P_3(1)| / 20^6
        let r = thm4_residual(c(1.0, 0.0), 20, 256).unwrap();
        let p3 = (1.0 + 5.0) / 64.0;
        assert!(r < 10.0 * p3 / 20f64.powi(6), "r = {r}");
        // and decreases with z on the sample grid
        let r_half = thm4_residual(c(0.5, 0.0), 20, 256).unwrap();
        let r_quarter = thm4_residual(c(0.25, 0.0), 20, 256).unwrap();
        assert!(r > r_half && r_half > r_quarter);
    }

    #[test]
    fn pk_recovery_two_percent() {
        let rec = pk_expansion_check(1.0, 16, 64).unwrap();
        for (k, rel) in rec.rel_errors.iter().enumerate() {
            assert!(*rel < 0.02, "P_{} off by {rel}: {:?}", k + 1, rec);
        }
        // evenness: same data at -z
        let rec_neg = pk_expansion_check(-1.0, 16, 64).unwrap();
        for k in 0..3 {
            assert!((rec.recovered[k] - rec_neg.recovered[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn radius_probe_dominates_certified_radius() {
        let fam = OperatorFamily::power(half()).unwrap();
        for n in [5u32, 10, 20] {
            let est = radius_probe(&fam, n, 8).unwrap();
            assert!(est > fam.radius(n), "estimate {est} below R_n at n={n}");
            assert!(est.is_finite() && est > 0.0);
        }
        // superlinear growth across n = 5..20
        let e5 = radius_probe(&fam, 5, 8).unwrap();
        let e20 = radius_probe(&fam, 20, 8).unwrap();
        assert!(e20 / e5 > 4.0, "e5 = {e5}, e20 = {e20}");
        // alpha = 0 probe is finite and positive
        let mat = OperatorFamily::power(Alpha::Rational(0, 1)).unwrap();
        let e6 = radius_probe(&mat, 6, 8).unwrap();
        assert!(e6.is_finite() && e6 > 0.0);
    }

    #[test]
    fn working_floor_is_small_at_z_one() {
        let fam = OperatorFamily::power(half()).unwrap();
        let floor = working_floor(&fam, c(1.0, 0.0), 256);
        assert!(floor <= 8, "floor = {floor}");
    }
}
