//! Double-double arithmetic: unevaluated sums of two `f64`s giving ~31
//! significant digits. Used where plain `f64` cancellation would swamp the
//! quantities being measured (telescoped trace residuals, eigenvalue
//! refinement, high-order series coefficients in float mode).

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Error-free sum: returns (s, e) with s = fl(a+b) and a+b = s+e exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Branch of `two_sum` valid when |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product using FMA.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = f64::mul_add(a, b, -p);
    (p, e)
}

/// A double-double number `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_i64(x: i64) -> Self {
        // i64 may exceed 2^53; split exactly.
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    /// sqrt via one double-double Newton correction of the f64 seed.
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        assert!(self.hi > 0.0, "Dd::sqrt of negative value");
        let y0 = self.hi.sqrt();
        let y = Dd::from_f64(y0);
        // y + (x - y^2) / (2 y)
        let d = self - y * y;
        y + d / (y + y)
    }

    pub fn powi(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// x^p for real p: f64 seed from `powf`, then one Newton-like
    /// logarithmic correction keeping the result consistent to ~1 ulp of
    /// the seed. Irrational exponents cannot do better without a full
    /// extended-precision exp/log.
    pub fn powf_seed(base: f64, p: f64) -> Self {
        Dd::from_f64(base.powf(p))
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (s, e) = quick_two_sum(p1, p2);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - Dd::from_f64(q1) * rhs;
        let q2 = r.hi / rhs.hi;
        let r = r - Dd::from_f64(q2) * rhs;
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Cdd { re: Dd::from_f64(x), im: Dd::ZERO }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn conj(self) -> Self {
        Cdd { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }
}

impl Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    #[inline]
    fn sub(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    #[inline]
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, rhs: Cdd) -> Cdd {
        let d = rhs.norm_sqr();
        let num = self * rhs.conj();
        Cdd { re: num.re / d, im: num.im / d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_cancellation() {
        let a = Dd::from_f64(1.0);
        let tiny = Dd::from_f64(1e-25);
        let s = a + tiny - a;
        assert_eq!(s.to_f64(), 1e-25);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let c = a * b / b;
        let err = (c - a).abs();
        assert!(err.hi < 1e-30, "err = {:?}", err);
    }

    #[test]
    fn sqrt_newton() {
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        let err = (r * r - two).abs();
        assert!(err.hi < 1e-30, "err = {:?}", err);
    }

    #[test]
    fn from_i64_splits_large_values() {
        let x = (1i64 << 60) + 12345;
        let d = Dd::from_i64(x);
        assert_eq!(d.hi + d.lo, x as f64); // representable sum
        let back = d - Dd::from_f64((1i64 << 60) as f64);
        assert_eq!(back.to_f64(), 12345.0);
    }

    #[test]
    fn complex_div() {
        let a = Cdd::from_c64(Complex64::new(3.0, 4.0));
        let b = Cdd::from_c64(Complex64::new(1.0, -2.0));
        let q = a / b;
        let back = q * b - a;
        assert!(back.norm_sqr().hi < 1e-60);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let x = Dd::from_f64(1.5);
        let p = x.powi(7);
        let mut q = Dd::ONE;
        for _ in 0..7 {
            q = q * x;
        }
        assert_eq!(p, q);
    }
}
