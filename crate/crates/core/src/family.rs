//! Operator families: the pencil L + zB with diagonal q_k and off-diagonal
//! entries b_k (super) and c_k (sub), together with the growth certificate
//! (M, alpha) meaning |b_k|, |c_k| <= M k^alpha.

use crate::error::{Error, Result};
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Exponent alpha, kept exact when it is a small rational so that exact
/// series arithmetic can key on 2*alpha being an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Rational(i32, u32),
    Real(f64),
}

impl Alpha {
    pub fn rational(num: i32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidFamily("alpha denominator is zero".into()));
        }
        let g = gcd(num.unsigned_abs(), den);
        Ok(Alpha::Rational(num / g as i32, den / g))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Alpha::Rational(p, q) => p as f64 / q as f64,
            Alpha::Real(x) => x,
        }
    }

    /// Returns p when 2*alpha = p is an integer (the exact-arithmetic case).
    pub fn two_alpha_integer(&self) -> Option<i64> {
        match *self {
            Alpha::Rational(p, q) => {
                if q == 1 {
                    Some(2 * p as i64)
                } else if q == 2 {
                    Some(p as i64)
                } else {
                    None
                }
            }
            Alpha::Real(x) => {
                let t = 2.0 * x;
                if t == t.round() {
                    Some(t as i64)
                } else {
                    None
                }
            }
        }
    }

    /// Parses "p/q" or a plain decimal.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i32 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad alpha numerator in {s:?}")))?;
            let q: u32 = q
                .trim()
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad alpha denominator in {s:?}")))?;
            Alpha::rational(p, q)
        } else {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad alpha {s:?}")))?;
            Ok(Alpha::Real(x))
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Alpha::Rational(p, 1) => write!(f, "{p}"),
            Alpha::Rational(p, q) => write!(f, "{p}/{q}"),
            Alpha::Real(x) => write!(f, "{x}"),
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Integer-indexed sequences for a custom family. Generators take k >= 1.
#[derive(Clone)]
pub struct CustomSequences {
    pub q: Arc<dyn Fn(u32) -> f64 + Send + Sync>,
    pub b: Arc<dyn Fn(u32) -> f64 + Send + Sync>,
    pub c: Arc<dyn Fn(u32) -> f64 + Send + Sync>,
    /// Largest index the sequences are defined for (None = unbounded).
    pub max_k: Option<u32>,
}

impl fmt::Debug for CustomSequences {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSequences")
            .field("max_k", &self.max_k)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum FamilyKind {
    /// q_k = k^2, b_k = c_k = k^alpha.
    Power { alpha: Alpha },
    /// q_k = k^2 (even) or (2k+1)^2 (odd); b_k = t - k, c_k = t + k.
    WhittakerHill { t: f64, parity: Parity },
    /// Caller-supplied sequences with an explicit growth certificate.
    Custom { seqs: CustomSequences, alpha: f64 },
}

/// A fully specified pencil with its growth certificate.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    kind: FamilyKind,
    growth_m: f64,
    growth_alpha: f64,
}

/// Number of indices the certificate is spot-checked on at build time.
const CERT_CHECK_RANGE: u32 = 10_000;

impl OperatorFamily {
    /// Power family q_k = k^2, b_k = c_k = k^alpha with alpha in [0, 2).
    /// The certificate is (M, alpha) = (1, alpha): |b_k| = k^alpha exactly.
    pub fn power(alpha: Alpha) -> Result<Self> {
        let a = alpha.value();
        if !(0.0..2.0).contains(&a) {
            return Err(Error::InvalidFamily(format!(
                "power family needs alpha in [0, 2), got {a}"
            )));
        }
        Ok(OperatorFamily {
            kind: FamilyKind::Power { alpha },
            growth_m: 1.0,
            growth_alpha: a,
        })
    }

    /// Whittaker-Hill family b_k = t - k, c_k = t + k with t >= 0.
    /// Certificate: |t -+ k| <= (1+t) k for k >= 1, so (M, alpha) = (1+t, 1).
    pub fn whittaker_hill(t: f64, parity: Parity) -> Result<Self> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidFamily(format!(
                "whittaker-hill family needs t >= 0, got {t}"
            )));
        }
        let fam = OperatorFamily {
            kind: FamilyKind::WhittakerHill { t, parity },
            growth_m: 1.0 + t,
            growth_alpha: 1.0,
        };
        fam.check_certificate()?;
        Ok(fam)
    }

    /// Custom family. The caller must supply the certificate (M, alpha);
    /// it is spot-checked on k = 1..10^4 (or the table range) and the
    /// family is refused when it fails, as is a non-increasing diagonal.
    pub fn custom(seqs: CustomSequences, growth_m: f64, growth_alpha: f64) -> Result<Self> {
        if growth_m <= 0.0 || !growth_m.is_finite() || !growth_alpha.is_finite() {
            return Err(Error::InvalidFamily(
                "custom family needs a finite growth certificate (M > 0, alpha)".into(),
            ));
        }
        let fam = OperatorFamily {
            kind: FamilyKind::Custom { seqs, alpha: growth_alpha },
            growth_m,
            growth_alpha,
        };
        fam.check_certificate()?;
        fam.check_diagonal()?;
        Ok(fam)
    }

    fn check_certificate(&self) -> Result<()> {
        let hi = match self.max_k() {
            Some(m) => m.min(CERT_CHECK_RANGE),
            None => CERT_CHECK_RANGE,
        };
        for k in 1..=hi {
            let cap = self.growth_m * (k as f64).powf(self.growth_alpha);
            // Tiny slack for the float powf on irrational alpha.
            let cap = cap * (1.0 + 1e-12);
            let (b, c) = (self.b(k), self.c(k));
            if b.abs() > cap {
                return Err(Error::BadCertificate {
                    m: self.growth_m,
                    alpha: self.growth_alpha,
                    k,
                    value: b.abs(),
                });
            }
            if c.abs() > cap {
                return Err(Error::BadCertificate {
                    m: self.growth_m,
                    alpha: self.growth_alpha,
                    k,
                    value: c.abs(),
                });
            }
        }
        Ok(())
    }

    fn check_diagonal(&self) -> Result<()> {
        let hi = match self.max_k() {
            Some(m) => m.min(CERT_CHECK_RANGE),
            None => CERT_CHECK_RANGE,
        };
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=hi {
            let q = self.q(k);
            if q <= prev {
                return Err(Error::InvalidFamily(format!(
                    "diagonal q must be strictly increasing; q_{k} = {q} <= q_{} = {prev}",
                    k - 1
                )));
            }
            prev = q;
        }
        Ok(())
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn growth_m(&self) -> f64 {
        self.growth_m
    }

    pub fn growth_alpha(&self) -> f64 {
        self.growth_alpha
    }

    /// Exact alpha for power families, None otherwise.
    pub fn power_alpha(&self) -> Option<Alpha> {
        match self.kind {
            FamilyKind::Power { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// Largest supported index for table-backed customs.
    pub fn max_k(&self) -> Option<u32> {
        match &self.kind {
            FamilyKind::Custom { seqs, .. } => seqs.max_k,
            _ => None,
        }
    }

    /// Whether the diagonal is exactly q_k = k^2. The localization
    /// geometry (strips, eigenvalue disks, counting windows, resolvent
    /// bounds) is derived for that diagonal only.
    pub fn has_square_diagonal(&self) -> bool {
        match &self.kind {
            FamilyKind::Power { .. } => true,
            FamilyKind::WhittakerHill { parity, .. } => *parity == Parity::Even,
            FamilyKind::Custom { seqs, .. } => {
                let hi = seqs.max_k.unwrap_or(64).min(64);
                (1..=hi).all(|k| (seqs.q)(k) == (k as f64) * (k as f64))
            }
        }
    }

    /// Diagonal entry q_k, k >= 1.
    pub fn q(&self, k: u32) -> f64 {
        debug_assert!(k >= 1);
        match &self.kind {
            FamilyKind::Power { .. } => (k as f64) * (k as f64),
            FamilyKind::WhittakerHill { parity, .. } => match parity {
                Parity::Even => (k as f64) * (k as f64),
                Parity::Odd => {
                    let m = 2.0 * k as f64 + 1.0;
                    m * m
                }
            },
            FamilyKind::Custom { seqs, .. } => (seqs.q)(k),
        }
    }

    /// Super-diagonal entry b_k, k >= 1; b_0 = 0 by the one-sided convention.
    pub fn b(&self, k: u32) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match &self.kind {
            FamilyKind::Power { alpha } => pow_alpha(k, alpha),
            FamilyKind::WhittakerHill { t, .. } => t - k as f64,
            FamilyKind::Custom { seqs, .. } => (seqs.b)(k),
        }
    }

    /// Sub-diagonal entry c_k, k >= 1; c_0 = 0 by the one-sided convention.
    pub fn c(&self, k: u32) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match &self.kind {
            FamilyKind::Power { alpha } => pow_alpha(k, alpha),
            FamilyKind::WhittakerHill { t, .. } => t + k as f64,
            FamilyKind::Custom { seqs, .. } => (seqs.c)(k),
        }
    }

    /// Localization radius R_n = n^(1-alpha) / (8M).
    pub fn radius(&self, n: u32) -> f64 {
        (n as f64).powf(1.0 - self.growth_alpha) / (8.0 * self.growth_m)
    }

    /// Diagonal entry in double-double precision.
    pub fn q_dd(&self, k: u32) -> crate::dd::Dd {
        use crate::dd::Dd;
        match &self.kind {
            FamilyKind::Power { .. } => Dd::from_i64(k as i64 * k as i64),
            FamilyKind::WhittakerHill { parity, .. } => match parity {
                Parity::Even => Dd::from_i64(k as i64 * k as i64),
                Parity::Odd => {
                    let m = 2 * k as i64 + 1;
                    Dd::from_i64(m * m)
                }
            },
            FamilyKind::Custom { seqs, .. } => Dd::from_f64((seqs.q)(k)),
        }
    }

    /// Super-diagonal entry in double-double precision.
    pub fn b_dd(&self, k: u32) -> crate::dd::Dd {
        use crate::dd::Dd;
        if k == 0 {
            return Dd::ZERO;
        }
        match &self.kind {
            FamilyKind::Power { alpha } => pow_alpha_dd(k, alpha),
            FamilyKind::WhittakerHill { t, .. } => Dd::from_f64(*t) - Dd::from_i64(k as i64),
            FamilyKind::Custom { seqs, .. } => Dd::from_f64((seqs.b)(k)),
        }
    }

    /// Sub-diagonal entry in double-double precision.
    pub fn c_dd(&self, k: u32) -> crate::dd::Dd {
        use crate::dd::Dd;
        if k == 0 {
            return Dd::ZERO;
        }
        match &self.kind {
            FamilyKind::Power { alpha } => pow_alpha_dd(k, alpha),
            FamilyKind::WhittakerHill { t, .. } => Dd::from_f64(*t) + Dd::from_i64(k as i64),
            FamilyKind::Custom { seqs, .. } => Dd::from_f64((seqs.c)(k)),
        }
    }

    /// Serializable form (only for families expressible as data).
    pub fn to_spec(&self) -> Option<FamilySpec> {
        match &self.kind {
            FamilyKind::Power { alpha } => Some(FamilySpec::Power { alpha: *alpha, m: self.growth_m }),
            FamilyKind::WhittakerHill { t, parity } => {
                Some(FamilySpec::WhittakerHill { t: *t, parity: *parity })
            }
            FamilyKind::Custom { .. } => None,
        }
    }
}

fn pow_alpha(k: u32, alpha: &Alpha) -> f64 {
    let kf = k as f64;
    match alpha {
        Alpha::Rational(0, _) => 1.0,
        Alpha::Rational(1, 2) => kf.sqrt(),
        Alpha::Rational(p, 1) => kf.powi(*p),
        _ => kf.powf(alpha.value()),
    }
}

fn pow_alpha_dd(k: u32, alpha: &Alpha) -> crate::dd::Dd {
    use crate::dd::Dd;
    let kd = Dd::from_i64(k as i64);
    match *alpha {
        Alpha::Rational(0, _) => Dd::ONE,
        Alpha::Rational(p, 1) => {
            if p >= 0 {
                kd.powi(p as u32)
            } else {
                kd.powi((-p) as u32).recip()
            }
        }
        Alpha::Rational(p, 2) => {
            // k^(p/2) = sqrt(k^p)
            if p >= 0 {
                kd.powi(p as u32).sqrt()
            } else {
                kd.powi((-p) as u32).sqrt().recip()
            }
        }
        _ => Dd::powf_seed(k as f64, alpha.value()),
    }
}

/// JSON wire form of a family, as consumed by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    Power {
        #[serde(serialize_with = "ser_alpha", deserialize_with = "de_alpha")]
        alpha: Alpha,
        #[serde(default = "one")]
        m: f64,
    },
    WhittakerHill {
        t: f64,
        parity: Parity,
    },
    Custom {
        q: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
        m: f64,
        alpha: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl FamilySpec {
    pub fn build(&self) -> Result<OperatorFamily> {
        match self {
            FamilySpec::Power { alpha, m } => {
                if (*m - 1.0).abs() > 1e-15 {
                    return Err(Error::InvalidFamily(
                        "power family uses the exact certificate M = 1".into(),
                    ));
                }
                OperatorFamily::power(*alpha)
            }
            FamilySpec::WhittakerHill { t, parity } => OperatorFamily::whittaker_hill(*t, *parity),
            FamilySpec::Custom { q, b, c, m, alpha } => {
                let len = q.len().min(b.len()).min(c.len());
                if len == 0 {
                    return Err(Error::InvalidFamily("custom tables are empty".into()));
                }
                let (q, b, c) = (q.clone(), b.clone(), c.clone());
                let seqs = CustomSequences {
                    q: Arc::new(move |k| q[(k - 1) as usize]),
                    b: Arc::new(move |k| b[(k - 1) as usize]),
                    c: Arc::new(move |k| c[(k - 1) as usize]),
                    max_k: Some(len as u32),
                };
                OperatorFamily::custom(seqs, *m, *alpha)
            }
        }
    }
}

fn ser_alpha<S: Serializer>(a: &Alpha, s: S) -> std::result::Result<S::Ok, S::Error> {
    match a {
        Alpha::Rational(p, q) if *q != 1 => s.serialize_str(&format!("{p}/{q}")),
        _ => s.serialize_f64(a.value()),
    }
}

fn de_alpha<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Alpha, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(Alpha::Real(x)),
        Raw::Str(s) => Alpha::parse(&s).map_err(serde::de::Error::custom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_alpha_zero_is_mathieu() {
        let fam = OperatorFamily::power(Alpha::rational(0, 1).unwrap()).unwrap();
        for k in 1..=20 {
            assert_eq!(fam.b(k), 1.0);
            assert_eq!(fam.c(k), 1.0);
            assert_eq!(fam.q(k), (k * k) as f64);
        }
    }

    #[test]
    fn power_alpha_half_entries() {
        let fam = OperatorFamily::power(Alpha::rational(1, 2).unwrap()).unwrap();
        assert_eq!(fam.b(2), 2.0_f64.sqrt());
        assert_eq!(fam.b(4), 2.0);
        // b_k c_k = k^{2 alpha} exactly
        for k in 1..=50u32 {
            let prod = fam.b(k) * fam.c(k);
            assert!((prod - k as f64).abs() < 1e-12 * k as f64);
        }
    }

    #[test]
    fn whittaker_hill_entries() {
        let fam = OperatorFamily::whittaker_hill(2.0, Parity::Even).unwrap();
        assert_eq!(fam.b(3), -1.0);
        assert_eq!(fam.c(3), 5.0);
        assert_eq!(fam.growth_m(), 3.0);
        assert_eq!(fam.growth_alpha(), 1.0);
    }

    #[test]
    fn rejects_alpha_out_of_range() {
        assert!(OperatorFamily::power(Alpha::Real(2.0)).is_err());
        assert!(OperatorFamily::power(Alpha::Real(-0.1)).is_err());
        assert!(OperatorFamily::whittaker_hill(-1.0, Parity::Even).is_err());
    }

    #[test]
    fn rejects_wrong_certificate() {
        let seqs = CustomSequences {
            q: Arc::new(|k| (k * k) as f64),
            b: Arc::new(|k| k as f64), // grows like k
            c: Arc::new(|k| k as f64),
            max_k: None,
        };
        // Claiming alpha = 1/2 is silently wrong; must be refused.
        let r = OperatorFamily::custom(seqs, 1.0, 0.5);
        assert!(matches!(r, Err(Error::BadCertificate { .. })));
    }

    #[test]
    fn radius_formula() {
        let fam = OperatorFamily::power(Alpha::rational(1, 2).unwrap()).unwrap();
        for n in 1..=64u32 {
            let expect = (n as f64).sqrt() / 8.0;
            assert!((fam.radius(n) - expect).abs() <= 1e-15 * expect);
        }
        // nondecreasing in n for alpha < 1
        let mut prev = 0.0;
        for n in 1..=100 {
            let r = fam.radius(n);
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn alpha_parsing_and_exactness() {
        let a = Alpha::parse("1/2").unwrap();
        assert_eq!(a.two_alpha_integer(), Some(1));
        let b = Alpha::parse("0.3").unwrap();
        assert_eq!(b.two_alpha_integer(), None);
        let c = Alpha::parse("1").unwrap();
        assert_eq!(c.two_alpha_integer(), Some(2));
        assert_eq!(Alpha::parse("2/4").unwrap(), Alpha::Rational(1, 2));
    }

    #[test]
    fn family_spec_json_roundtrip() {
        let spec: FamilySpec = serde_json::from_str(r#"{"kind":"power","alpha":"1/2"}"#).unwrap();
        let fam = spec.build().unwrap();
        assert_eq!(fam.power_alpha(), Some(Alpha::Rational(1, 2)));
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("1/2"));

        let wh: FamilySpec =
            serde_json::from_str(r#"{"kind":"whittaker-hill","t":2.0,"parity":"even"}"#).unwrap();
        let fam = wh.build().unwrap();
        assert_eq!(fam.b(3), -1.0);
    }
}
