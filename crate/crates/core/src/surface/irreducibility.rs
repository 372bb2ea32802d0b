//! Sign-pattern irreducibility certificates. A surface is certified
//! irreducible when some derivative order k has all coefficients a_k(n)
//! of one sign except exactly one, and the telescoped total sum vanishes:
//! no proper label subset can then sum to zero, so the monodromy acts
//! transitively.

use crate::error::{Error, Result};
use crate::family::{Alpha, OperatorFamily};
use crate::series::{rat_to_f64, Rat};
use crate::taylor::{closed_coefficient, phi_closed, psi_half};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedIrreducible,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityReport {
    pub alpha: f64,
    pub k_used: u32,
    pub n_checked: u32,
    /// Sign of a_k(n) for n = 1..=n_checked (+1, -1, or 0).
    pub sign_pattern: Vec<i8>,
    /// Index of the unique opposite-sign term, when the pattern holds.
    pub exceptional_index: Option<u32>,
    /// Whether sum_{n<=N} a_k(n) telescopes to a vanishing generator.
    pub telescoped_sum_check: bool,
    pub verdict: Verdict,
}

/// The alpha intervals on which the k = 4 sign pattern is proved.
fn alpha_certified_k4(alpha: f64) -> bool {
    let upper_start = (2.0 - 2.0f64.sqrt()) / 4.0;
    (0.0..=0.085).contains(&alpha) || (alpha >= upper_start && alpha < 0.5)
}

fn one_exception(signs: &[i8]) -> Option<u32> {
    let pos = signs.iter().filter(|s| **s > 0).count();
    let neg = signs.iter().filter(|s| **s < 0).count();
    if pos + neg != signs.len() {
        return None; // a zero breaks the pattern
    }
    let minority = if pos == 1 && neg > 1 {
        1i8
    } else if neg == 1 && pos > 1 {
        -1i8
    } else {
        return None;
    };
    signs
        .iter()
        .position(|s| *s == minority)
        .map(|i| i as u32 + 1)
}

/// Certificate for the power family at the given alpha, using derivative
/// order k in {4, 6}. k = 6 requires alpha = 1/2; k = 4 covers
/// alpha in [0, 1/2). The verdict never extrapolates beyond the proved
/// alpha intervals even when the observed pattern extends further.
pub fn irreducibility_certificate(
    alpha: Alpha,
    k: u32,
    n_max: u32,
) -> Result<IrreducibilityReport> {
    if n_max < 8 {
        return Err(Error::InvalidFamily("certificate needs N >= 8".into()));
    }
    let alpha_f = alpha.value();
    match k {
        6 => {
            if alpha.two_alpha_integer() != Some(1) {
                return Err(Error::AlphaOutOfRange(alpha_f));
            }
            // a_6(1/2, n) = psi(n) - psi(n-1) for n >= 2; a_6(1/2, 1) = psi(1)
            let mut signs = Vec::with_capacity(n_max as usize);
            let mut sum = Rat::zero();
            for n in 1..=n_max {
                let a6 = if n == 1 {
                    psi_half(1)
                } else {
                    psi_half(n) - psi_half(n - 1)
                };
                signs.push(rat_sign(&a6));
                sum += a6;
            }
            // telescoped: sum = psi(N), and psi(N) -> 0 from below
            let tele = sum == psi_half(n_max)
                && rat_to_f64(&psi_half(n_max)).abs()
                    < rat_to_f64(&psi_half(n_max / 2)).abs();
            let exceptional = one_exception(&signs);
            let verdict = if exceptional == Some(1) && tele {
                Verdict::CertifiedIrreducible
            } else {
                Verdict::Inconclusive
            };
            Ok(IrreducibilityReport {
                alpha: alpha_f,
                k_used: 6,
                n_checked: n_max,
                sign_pattern: signs,
                exceptional_index: exceptional,
                telescoped_sum_check: tele,
                verdict,
            })
        }
        4 => {
            if !(0.0..0.5).contains(&alpha_f) {
                return Err(Error::AlphaOutOfRange(alpha_f));
            }
            let fam = OperatorFamily::power(alpha)?;
            // a_4(n) = phi_4(n) - phi_4(n-1), a_4(1) = phi_4(1)
            let mut signs = Vec::with_capacity(n_max as usize);
            let mut prev = 0.0f64;
            let mut sum = 0.0f64;
            let mut scale = 0.0f64;
            for n in 1..=n_max {
                let phi = phi_closed(&fam, 4, n)?.to_f64();
                let a4 = phi - prev;
                prev = phi;
                sum += a4;
                scale = scale.max(phi.abs());
                signs.push(float_sign(a4));
            }
            let phi_half_n = phi_closed(&fam, 4, n_max / 2)?.to_f64();
            let tele = (sum - prev).abs() <= 1e-10 * scale.max(1e-300)
                && prev.abs() < phi_half_n.abs();
            let exceptional = one_exception(&signs);
            let verdict = if exceptional.is_some() && tele && alpha_certified_k4(alpha_f) {
                Verdict::CertifiedIrreducible
            } else {
                Verdict::Inconclusive
            };
            Ok(IrreducibilityReport {
                alpha: alpha_f,
                k_used: 4,
                n_checked: n_max,
                sign_pattern: signs,
                exceptional_index: exceptional,
                telescoped_sum_check: tele,
                verdict,
            })
        }
        _ => Err(Error::UnsupportedOrder { k, alpha: alpha_f }),
    }
}

fn rat_sign(r: &Rat) -> i8 {
    if Zero::is_zero(r) {
        0
    } else if r > &Rat::zero() {
        1
    } else {
        -1
    }
}

fn float_sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Certificate for families with strictly decreasing positive
/// off-diagonals and negative growth exponent: the order-2 coefficients
/// already show the one-exception pattern a_2(1) < 0 < a_2(n).
pub fn decreasing_family_certificate(family: &OperatorFamily) -> Result<IrreducibilityReport> {
    let probe = family.max_k().map(|m| m.min(1000)).unwrap_or(1000);
    for k in 1..probe {
        let (b0, b1) = (family.b(k), family.b(k + 1));
        let (c0, c1) = (family.c(k), family.c(k + 1));
        if !(b1 > 0.0 && c1 > 0.0 && b1 < b0 && c1 < c0) {
            return Err(Error::NotMonotone { k });
        }
    }
    let alpha = family.growth_alpha();
    if alpha >= 0.0 {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let n_max = 50u32.min(probe);
    let mut signs = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        // a_2(n) = b_{n-1} c_{n-1}/(2n-1) - b_n c_n/(2n+1), with b_0 c_0 = 0
        let prev = family.b(n - 1) * family.c(n - 1);
        let cur = family.b(n) * family.c(n);
        let a2 = prev / (2.0 * n as f64 - 1.0) - cur / (2.0 * n as f64 + 1.0);
        signs.push(float_sign(a2));
    }
    let exceptional = one_exception(&signs);
    let verdict = if exceptional == Some(1) {
        Verdict::CertifiedIrreducible
    } else {
        Verdict::Inconclusive
    };
    Ok(IrreducibilityReport {
        alpha,
        k_used: 2,
        n_checked: n_max,
        sign_pattern: signs,
        exceptional_index: exceptional,
        telescoped_sum_check: true,
        verdict,
    })
}

/// The n = 1 and n = 2 fourth-order values on the gamma = 2 alpha grid,
/// used by the grid checks: a~_4(gamma, 1) = 1/27 - 2^gamma/72 and the
/// telescoped a~_4(gamma, 2).
pub fn a4_tilde(gamma: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidFamily("n >= 1".into()));
    }
    let alpha = Alpha::Real(gamma / 2.0);
    Ok(closed_coefficient(alpha, n, 4)
        .or_else(|_| {
            // below the b21 floor: telescope through phi_4
            let fam = OperatorFamily::power(alpha)?;
            let hi = phi_closed(&fam, 4, n)?.to_f64();
            let lo = if n == 1 { 0.0 } else { phi_closed(&fam, 4, n - 1)?.to_f64() };
            Ok::<_, Error>(crate::taylor::CoeffValue::Approx(hi - lo))
        })?
        .to_f64())
}
