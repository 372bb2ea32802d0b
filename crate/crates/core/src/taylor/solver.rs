//! Order-by-order solution of the quasi-linear branch equation
//! zeta = sum_L z^L <T^{L-1} B e_n, e_n>(zeta), where each scalar product
//! expands over admissible walks into products of step weights and
//! resolvent factors 1/(zeta - d). Exact rational arithmetic when the
//! weights are integer powers (power families with 2*alpha integer),
//! double-double floats otherwise.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, OperatorFamily};
use crate::series::{Coeff, Rat, Series};
use crate::taylor::walks::{admissible_walks, Walk};
use num_bigint::BigInt;
use num_traits::One;

pub(crate) trait WalkContext<C: Coeff> {
    /// Product of the step weights of the walk (independent of zeta).
    fn walk_weight(&self, w: &Walk) -> C;
    /// Resolvent denominator offset d(delta) = q(n + delta) - q(n), delta != 0.
    fn denom(&self, delta: i32) -> C;
    fn anchor(&self) -> u32;
}

/// Exact context for power families with p = 2*alpha a nonnegative integer:
/// each lattice edge j is crossed an even number of times, contributing
/// j^(p * crossings / 2).
pub(crate) struct ExactPowerContext {
    pub n: u32,
    pub p: u32,
}

impl WalkContext<Rat> for ExactPowerContext {
    fn walk_weight(&self, w: &Walk) -> Rat {
        let mut num = BigInt::one();
        for (edge_off, cross) in w.edge_crossings() {
            debug_assert!(cross % 2 == 0);
            let base = self.n as i64 + edge_off as i64;
            debug_assert!(base >= 1);
            let exp = self.p * (cross / 2);
            if exp > 0 {
                num *= BigInt::from(base).pow(exp);
            }
        }
        Rat::from_integer(num)
    }

    fn denom(&self, delta: i32) -> Rat {
        // (n + delta)^2 - n^2 = delta (2n + delta)
        let d = delta as i64 * (2 * self.n as i64 + delta as i64);
        Rat::from_integer(BigInt::from(d))
    }

    fn anchor(&self) -> u32 {
        self.n
    }
}

/// Double-double context valid for any family.
pub(crate) struct FloatContext<'a> {
    pub family: &'a OperatorFamily,
    pub n: u32,
}

impl WalkContext<Dd> for FloatContext<'_> {
    fn walk_weight(&self, w: &Walk) -> Dd {
        let mut acc = Dd::ONE;
        let mut state = self.n as i64;
        for s in &w.steps {
            if *s > 0 {
                acc = acc * self.family.c_dd(state as u32);
                state += 1;
            } else {
                acc = acc * self.family.b_dd((state - 1) as u32);
                state -= 1;
            }
        }
        acc
    }

    fn denom(&self, delta: i32) -> Dd {
        let j = (self.n as i64 + delta as i64) as u32;
        self.family.q_dd(j) - self.family.q_dd(self.n)
    }

    fn anchor(&self) -> u32 {
        self.n
    }
}

/// Coefficients a_1 .. a_{2 k_max} of the branch deviation
/// zeta(z) = E_n(z) - q_n, solved order by order with no evenness
/// assumption (odd orders come out exactly zero because no odd-length
/// walk closes).
pub(crate) fn solve_coefficients<C: Coeff>(
    ctx: &impl WalkContext<C>,
    k_max: u32,
) -> Vec<C> {
    let max_order = 2 * k_max as usize;
    let len = max_order + 1;

    // G_L as polynomials in zeta, one per walk length L.
    let mut g_by_length: Vec<(usize, Series<C>)> = Vec::new();
    for length in 2..=max_order {
        // zeta has valuation 2 in z, so z^L G_L(zeta) needs zeta-degree
        // (max_order - L) / 2 at most.
        let zeta_deg = (max_order - length) / 2;
        let walks = admissible_walks(length as u32, ctx.anchor());
        if walks.is_empty() {
            continue;
        }
        let mut g = Series::<C>::zero(zeta_deg + 1);
        for w in &walks {
            let weight = ctx.walk_weight(w);
            if weight.is_zero() {
                continue;
            }
            // product of 1/(zeta - d_nu) over the internal partial sums
            let mut term = Series::constant(weight, zeta_deg + 1);
            for delta in &w.deltas[..w.deltas.len() - 1] {
                let d = ctx.denom(*delta);
                let factor = Series::geometric_reciprocal(&d.neg(), zeta_deg + 1);
                term = term.mul(&factor);
            }
            g = g.add(&term);
        }
        g_by_length.push((length, g));
    }

    // Fixed point: zeta_{s+1}(z) = sum_L z^L G_L(zeta_s(z)); the z^j
    // coefficient is final once s >= j/2.
    let mut zeta = Series::<C>::zero(len);
    for _ in 0..=k_max {
        let mut next = Series::<C>::zero(len);
        for (length, g) in &g_by_length {
            let mut g_padded = Series::<C>::zero(len);
            g_padded.coeffs[..g.coeffs.len()].clone_from_slice(&g.coeffs);
            let composed = g_padded.compose(&zeta);
            next = next.add(&composed.shift(*length));
        }
        zeta = next;
    }
    zeta.coeffs.remove(0);
    zeta.coeffs
}

/// Backend selector for the branch-equation solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Exact when the family supports it, float otherwise.
    Auto,
    /// Arbitrary-precision rationals; errors when 2*alpha is not an integer.
    Exact,
    /// Double-double floats.
    Float,
}

pub(crate) fn exact_power_exponent(family: &OperatorFamily) -> Option<u32> {
    match family.kind() {
        FamilyKind::Power { alpha } => {
            let p = alpha.two_alpha_integer()?;
            u32::try_from(p).ok()
        }
        _ => None,
    }
}

/// All coefficients a_1 .. a_{max_order} in exact arithmetic.
pub(crate) fn solve_exact(family: &OperatorFamily, n: u32, k_max: u32) -> Result<Vec<Rat>> {
    let p = exact_power_exponent(family).ok_or(Error::ExactUnavailable {
        two_alpha: 2.0 * family.growth_alpha(),
    })?;
    Ok(solve_coefficients(&ExactPowerContext { n, p }, k_max))
}

/// All coefficients a_1 .. a_{max_order} in double-double arithmetic.
pub(crate) fn solve_float(family: &OperatorFamily, n: u32, k_max: u32) -> Result<Vec<Dd>> {
    if let Some(max_k) = family.max_k() {
        if n + k_max > max_k {
            return Err(Error::InvalidFamily(format!(
                "custom tables cover k <= {max_k}, solver needs k <= {}",
                n + k_max
            )));
        }
    }
    Ok(solve_coefficients(&FloatContext { family, n }, k_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Alpha;
    use num_bigint::BigInt;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    fn jc() -> OperatorFamily {
        OperatorFamily::power(Alpha::Rational(1, 2)).unwrap()
    }

    #[test]
    fn n1_alpha_half_first_three_orders() {
        let coeffs = solve_exact(&jc(), 1, 3).unwrap();
        // a_1, a_3, a_5 vanish; a_2 = -1/3, a_4 = 1/108, a_6 = -1/1215
        assert_eq!(coeffs[0], rat(0, 1));
        assert_eq!(coeffs[1], rat(-1, 3));
        assert_eq!(coeffs[2], rat(0, 1));
        assert_eq!(coeffs[3], rat(1, 108));
        assert_eq!(coeffs[4], rat(0, 1));
        assert_eq!(coeffs[5], rat(-1, 1215));
    }

    #[test]
    fn odd_orders_vanish_identically() {
        for n in [1u32, 2, 5] {
            let coeffs = solve_exact(&jc(), n, 4).unwrap();
            for (i, c) in coeffs.iter().enumerate() {
                let order = i + 1;
                if order % 2 == 1 {
                    assert!(c.is_zero(), "a_{order}({n}) != 0: {c}");
                }
            }
        }
    }

    #[test]
    fn mathieu_matches_telescoped_a2() {
        // alpha = 0, n = 5: a_2 = 1/9 - 1/11 = 2/99
        let fam = OperatorFamily::power(Alpha::Rational(0, 1)).unwrap();
        let coeffs = solve_exact(&fam, 5, 1).unwrap();
        assert_eq!(coeffs[1], rat(2, 99));
    }

    #[test]
    fn float_backend_agrees_with_exact() {
        let fam = jc();
        for n in [1u32, 3, 7] {
            let exact = solve_exact(&fam, n, 4).unwrap();
            let float = solve_float(&fam, n, 4).unwrap();
            for (e, f) in exact.iter().zip(&float) {
                assert!(
                    (e.to_f64() - f.to_f64()).abs() <= 1e-25 * e.to_f64().abs().max(1e-3),
                    "n={n}: {e:?} vs {f:?}"
                );
            }
        }
    }

    #[test]
    fn whittaker_hill_float_solver_runs() {
        let fam = OperatorFamily::whittaker_hill(2.5, crate::family::Parity::Even).unwrap();
        let coeffs = solve_float(&fam, 4, 2).unwrap();
        // a_2(n) = b_{n-1}c_{n-1}/(2n-1) - b_n c_n/(2n+1) with
        // b_3 c_3 = (t-3)(t+3), b_4 c_4 = (t-4)(t+4), t = 2.5
        let t = 2.5f64;
        let expect = (t - 3.0) * (t + 3.0) / 7.0 - (t - 4.0) * (t + 4.0) / 9.0;
        assert!((coeffs[1].to_f64() - expect).abs() < 1e-28);
    }
}
