//! Truncated formal power series over an abstract coefficient ring, with
//! exact big-rational and double-double backends.

use crate::dd::Dd;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

/// Coefficient ring used by the series engine.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(x: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Coeff for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn from_i64(x: i64) -> Self {
        Rat::from_integer(BigInt::from(x))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl Coeff for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn one() -> Self {
        Dd::ONE
    }
    fn from_i64(x: i64) -> Self {
        Dd::from_i64(x)
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn div(&self, o: &Self) -> Self {
        *self / *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
    fn to_f64(&self) -> f64 {
        Dd::to_f64(*self)
    }
}

/// Exact-to-nearest conversion that survives numerators/denominators far
/// beyond f64 range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if Zero::is_zero(r) {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // scale both to ~100 bits before dividing
    let shift_num = (nb - 100).max(0) as usize;
    let shift_den = (db - 100).max(0) as usize;
    let n = (num >> shift_num).to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = (den >> shift_den).to_string().parse::<f64>().unwrap_or(f64::NAN);
    (n / d) * 2f64.powi(shift_num as i32 - shift_den as i32)
}

/// Two-term (hi + lo) double-double rendering of a rational.
pub fn rat_to_dd(r: &Rat) -> Dd {
    let hi = rat_to_f64(r);
    if !hi.is_finite() {
        return Dd::from_f64(hi);
    }
    let rem = match Rat::from_float(hi) {
        Some(h) => r - h,
        None => return Dd::from_f64(hi),
    };
    Dd::new(hi, rat_to_f64(&rem))
}

/// Dense truncated power series; `coeffs[i]` multiplies x^i.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<C: Coeff> {
    pub coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    pub fn zero(len: usize) -> Self {
        Series { coeffs: vec![C::zero(); len] }
    }

    pub fn constant(c: C, len: usize) -> Self {
        let mut s = Self::zero(len);
        if len > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        Series {
            coeffs: (0..len).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let len = self.len().min(o.len());
        let mut out = vec![C::zero(); len];
        for i in 0..len {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..len - i {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        Series { coeffs: out }
    }

    /// Multiply by x^k (drop overflowing orders).
    pub fn shift(&self, k: usize) -> Self {
        let len = self.len();
        let mut out = vec![C::zero(); len];
        let kept = len.saturating_sub(k);
        out[k..k + kept].clone_from_slice(&self.coeffs[..kept]);
        Series { coeffs: out }
    }

    /// 1 / (c + x) as a geometric series: -sum x^j * (-1/c)^{j+1}
    /// (requires c != 0).
    pub fn geometric_reciprocal(c: &C, len: usize) -> Self {
        let inv = C::one().div(c);
        let mut out = Vec::with_capacity(len);
        let mut cur = inv.clone();
        for _ in 0..len {
            out.push(cur.clone());
            cur = cur.mul(&inv).neg();
        }
        Series { coeffs: out }
    }

    /// Composition self(g) for g with zero constant term, by Horner.
    pub fn compose(&self, g: &Self) -> Self {
        assert!(g.coeffs.first().map(|c| c.is_zero()).unwrap_or(true));
        let len = self.len().min(g.len());
        let mut acc = Series::zero(len);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn geometric_reciprocal_matches_definition() {
        // 1/(3 + x): coefficients 1/3, -1/9, 1/27, ...
        let s: Series<Rat> = Series::geometric_reciprocal(&rat(3, 1), 4);
        assert_eq!(s.coeffs, vec![rat(1, 3), rat(-1, 9), rat(1, 27), rat(-1, 81)]);
        // multiply back: must give 1 through the truncation order
        let lin = Series {
            coeffs: vec![rat(3, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
        };
        let prod = s.mul(&lin);
        assert_eq!(prod.coeffs[0], rat(1, 1));
        assert!(prod.coeffs[1..3].iter().all(Zero::is_zero));
    }

    #[test]
    fn compose_quadratic() {
        // f(y) = 1 + y + y^2, g(x) = x + x^2:
        // f(g) = 1 + x + 2x^2 + 2x^3 + ...
        let f = Series { coeffs: vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(0, 1)] };
        let g = Series { coeffs: vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(0, 1)] };
        let h = f.compose(&g);
        assert_eq!(h.coeffs[0], rat(1, 1));
        assert_eq!(h.coeffs[1], rat(1, 1));
        assert_eq!(h.coeffs[2], rat(2, 1));
        assert_eq!(h.coeffs[3], rat(2, 1));
    }

    #[test]
    fn rational_to_f64_handles_huge_terms() {
        let big = BigInt::from(10u32).pow(400);
        let r = Rat::new(big.clone() * 3, big * 4);
        assert!((rat_to_f64(&r) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn dd_series_matches_rational() {
        let sr: Series<Rat> = Series::geometric_reciprocal(&rat(7, 1), 6);
        let sd: Series<Dd> = Series::geometric_reciprocal(&Dd::from_f64(7.0), 6);
        for (a, b) in sr.coeffs.iter().zip(&sd.coeffs) {
            assert!((a.to_f64() - b.to_f64()).abs() < 1e-25);
        }
    }
}
