//! Taylor coefficients a_{2k}(n) of the eigenvalue branches at z = 0, by
//! two independent routes: closed forms obtained from residue computations
//! and the order-by-order walk-sum solution of the branch equation. Exact
//! rationals wherever 2*alpha is an integer.

pub mod solver;
pub mod walks;

use crate::error::{Error, Result};
use crate::family::{Alpha, FamilyKind, OperatorFamily};
use crate::series::{rat_to_f64, Coeff, Rat};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

pub use solver::Backend;
pub use walks::{admissible_walks, Walk};

/// A coefficient value: exact rational when the arithmetic permits.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffValue {
    Exact(Rat),
    Approx(f64),
}

impl CoeffValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            CoeffValue::Exact(r) => rat_to_f64(r),
            CoeffValue::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            CoeffValue::Exact(r) => Some(r),
            CoeffValue::Approx(_) => None,
        }
    }

    /// Render as "p/q" (exact) or a full-precision float.
    pub fn render(&self) -> String {
        match self {
            CoeffValue::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            CoeffValue::Approx(x) => format!("{x:.17e}"),
        }
    }
}

/// Taylor data for one branch: even coefficients a_2, a_4, ..., a_{2 k_max}
/// (odd ones vanish identically and are never stored), plus everything the
/// tail bound needs.
#[derive(Debug, Clone)]
pub struct TaylorSeries {
    pub n: u32,
    pub k_max: u32,
    /// a_{2k} for k = 1..=k_max, exact when available.
    pub exact: Option<Vec<Rat>>,
    /// Same coefficients as floats (always populated).
    pub approx: Vec<f64>,
    base: f64,
    growth_m: f64,
    growth_alpha: f64,
}

impl TaylorSeries {
    /// a_{2k} as f64 (k = 1..=k_max).
    pub fn coeff_f64(&self, k: u32) -> f64 {
        self.approx[(k - 1) as usize]
    }

    pub fn coeff(&self, k: u32) -> CoeffValue {
        match &self.exact {
            Some(v) => CoeffValue::Exact(v[(k - 1) as usize].clone()),
            None => CoeffValue::Approx(self.approx[(k - 1) as usize]),
        }
    }

    /// q_n + sum_{k<=k_max} a_{2k} z^{2k}.
    pub fn partial_sum(&self, z: Complex64) -> Complex64 {
        let z2 = z * z;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..=self.k_max).rev() {
            acc = (acc + self.coeff_f64(k)) * z2;
        }
        acc + self.base
    }

    /// The same partial sum accumulated in double-double precision
    /// (coefficients taken exactly when available).
    pub fn partial_sum_dd(&self, z: Complex64) -> crate::dd::Cdd {
        use crate::dd::{Cdd, Dd};
        let zd = Cdd::from_c64(z);
        let z2 = zd * zd;
        let mut acc = Cdd::ZERO;
        for k in (1..=self.k_max).rev() {
            let c = match &self.exact {
                Some(v) => crate::series::rat_to_dd(&v[(k - 1) as usize]),
                None => Dd::from_f64(self.approx[(k - 1) as usize]),
            };
            acc = (acc + Cdd::new(c, Dd::ZERO)) * z2;
        }
        acc + Cdd::from_f64(self.base)
    }

    /// Certified bound on |E_n(z) - partial sum through a_{2(from_k-1)}|:
    /// the tail sum_{k >= from_k} |a_{2k}| |z|^{2k} estimated through the
    /// smaller of the two geometric coefficient bounds. Divergent when
    /// |z| is outside both bounds' convergence disks.
    pub fn tail_bound(&self, z_abs: f64, from_k: u32) -> Result<f64> {
        tail_bound_value(self.growth_m, self.growth_alpha, self.n, z_abs, from_k)
    }
}

/// Both coefficient bounds at order k (the z-order, even):
/// (2(2k+1) (4M)^k n^(1-(1-alpha)k),  (8M)^k n^(1-k(1-alpha))).
pub fn coefficient_bounds(family: &OperatorFamily, n: u32, k: u32) -> (f64, f64) {
    let m = family.growth_m();
    let alpha = family.growth_alpha();
    let nf = n as f64;
    let kf = k as f64;
    let decay = nf.powf(1.0 - (1.0 - alpha) * kf);
    let p8 = 2.0 * (2.0 * kf + 1.0) * (4.0 * m).powf(kf) * decay;
    let cauchy = (8.0 * m).powf(kf) * decay;
    (p8, cauchy)
}

/// Geometric tail bound sum_{k >= from_k} min(bound_k) |z|^(2k); from_k in
/// half-order convention (a_{2k}).
pub fn tail_bound_value(
    growth_m: f64,
    growth_alpha: f64,
    n: u32,
    z_abs: f64,
    from_k: u32,
) -> Result<f64> {
    if z_abs == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let decay = nf.powf(2.0 * (growth_alpha - 1.0));
    let q_cauchy = (8.0 * growth_m * z_abs).powi(2) * decay;
    let q_p8 = (4.0 * growth_m * z_abs).powi(2) * decay;
    if q_p8 >= 1.0 {
        return Err(Error::Divergent {
            z_abs,
            radius: nf.powf(1.0 - growth_alpha) / (4.0 * growth_m),
        });
    }
    let kf = from_k as f64;
    let tail_cauchy = if q_cauchy < 1.0 {
        nf * q_cauchy.powf(kf) / (1.0 - q_cauchy)
    } else {
        f64::INFINITY
    };
    // sum_{k>=K} k x^k = x^K (K - (K-1) x) / (1-x)^2
    let sk = q_p8.powf(kf) * (kf - (kf - 1.0) * q_p8) / (1.0 - q_p8).powi(2);
    let s0 = q_p8.powf(kf) / (1.0 - q_p8);
    let tail_p8 = 2.0 * nf * (4.0 * sk + s0);
    Ok(tail_cauchy.min(tail_p8))
}

// ---- closed forms ----------------------------------------------------

/// Evaluation plan for m^(2 alpha) shared by the exact and float paths.
trait PowView: Clone {
    type C: Coeff;
    fn pw(&self, m: u32) -> Self::C;
    fn int(&self, v: i64) -> Self::C {
        Self::C::from_i64(v)
    }
}

#[derive(Clone)]
struct ExactPow {
    p: u32,
}

impl PowView for ExactPow {
    type C = Rat;
    fn pw(&self, m: u32) -> Rat {
        Rat::from_integer(BigInt::from(m).pow(self.p))
    }
}

#[derive(Clone)]
struct FloatPow {
    two_alpha: f64,
}

impl PowView for FloatPow {
    type C = f64;
    fn pw(&self, m: u32) -> f64 {
        (m as f64).powf(self.two_alpha)
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(x: i64) -> Self {
        x as f64
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
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// a_2(n) = (n-1)^(2a)/(2n-1) - n^(2a)/(2n+1), n >= 2.
fn a2_general<P: PowView>(v: &P, n: i64) -> P::C {
    let left = v.pw((n - 1) as u32).div(&v.int(2 * n - 1));
    let right = v.pw(n as u32).div(&v.int(2 * n + 1));
    left.sub(&right)
}

/// sigma_3(n) = (n-1)^(2a)/(2n-1)^2 + n^(2a)/(2n+1)^2.
fn sigma3<P: PowView>(v: &P, n: i64) -> P::C {
    let l = v.pw((n - 1) as u32).div(&v.int((2 * n - 1) * (2 * n - 1)));
    let r = v.pw(n as u32).div(&v.int((2 * n + 1) * (2 * n + 1)));
    l.add(&r)
}

/// a_4(n) = -a_2(n) sigma_3(n)
///          + (n-1)^(2a)(n-2)^(2a)/((2n-1)^2 (4n-4))
///          - n^(2a)(n+1)^(2a)/((2n+1)^2 (4n+4)), n >= 3.
fn a4_general<P: PowView>(v: &P, n: i64) -> P::C {
    let head = a2_general(v, n).neg().mul(&sigma3(v, n));
    let t1 = v
        .pw((n - 1) as u32)
        .mul(&v.pw((n - 2) as u32))
        .div(&v.int((2 * n - 1) * (2 * n - 1) * (4 * n - 4)));
    let t2 = v
        .pw(n as u32)
        .mul(&v.pw((n + 1) as u32))
        .div(&v.int((2 * n + 1) * (2 * n + 1) * (4 * n + 4)));
    head.add(&t1).sub(&t2)
}

fn sigma1<P: PowView>(v: &P, n: i64) -> P::C {
    let a = v
        .pw((n - 1) as u32)
        .mul(&v.pw((n - 2) as u32))
        .mul(&v.pw((n - 2) as u32))
        .div(&v.int((2 * n - 1).pow(3) * (4 * n - 4) * (4 * n - 4)));
    let b = v
        .pw(n as u32)
        .mul(&v.pw((n + 1) as u32))
        .mul(&v.pw((n + 1) as u32))
        .div(&v.int((2 * n + 1).pow(3) * (4 * n + 4) * (4 * n + 4)));
    let c = v
        .pw((n - 1) as u32)
        .mul(&v.pw((n - 2) as u32))
        .mul(&v.pw((n - 3) as u32))
        .div(&v.int((2 * n - 1).pow(2) * (4 * n - 4).pow(2) * (6 * n - 9)));
    let d = v
        .pw(n as u32)
        .mul(&v.pw((n + 1) as u32))
        .mul(&v.pw((n + 2) as u32))
        .div(&v.int((2 * n + 1).pow(2) * (4 * n + 4).pow(2) * (6 * n + 9)));
    a.sub(&b).add(&c).sub(&d)
}

/// sigma_2 carries the first-order zeta-response of the fourth-order
/// resolvent products plus the second-order response of the second-order
/// ones; the latter enters weighted by a_2(n) (the flat form without that
/// weight is inconsistent with the alpha = 1/2 sixth-order rational form
/// and with the walk-sum solution).
fn sigma2<P: PowView>(v: &P, n: i64) -> P::C {
    let one = P::C::one();
    let f1 = v
        .pw((n - 1) as u32)
        .mul(&v.pw((n - 2) as u32))
        .div(&v.int((2 * n - 1).pow(2) * (4 * n - 4)));
    let br1 = v
        .int(2)
        .div(&v.int(2 * n - 1))
        .add(&one.div(&v.int(4 * n - 4)));
    let f2 = v
        .pw(n as u32)
        .mul(&v.pw((n + 1) as u32))
        .div(&v.int((2 * n + 1).pow(2) * (4 * n + 4)));
    let br2 = v
        .int(2)
        .div(&v.int(2 * n + 1))
        .add(&one.div(&v.int(4 * n + 4)));
    let t3 = v.pw(n as u32).div(&v.int((2 * n + 1).pow(3)));
    let t4 = v.pw((n - 1) as u32).div(&v.int((2 * n - 1).pow(3)));
    let second_order = t3.sub(&t4).mul(&a2_general(v, n));
    f1.mul(&br1).add(&f2.mul(&br2)).add(&second_order)
}

/// a_6(n) = sigma_1 - a_2 sigma_2 - a_4 sigma_3, n >= 4.
fn a6_general<P: PowView>(v: &P, n: i64) -> P::C {
    sigma1(v, n)
        .sub(&a2_general(v, n).mul(&sigma2(v, n)))
        .sub(&a4_general(v, n).mul(&sigma3(v, n)))
}

/// a_4(1) = 1/27 - 2^(2a)/72.
fn a4_n1<P: PowView>(v: &P) -> P::C {
    P::C::one().div(&v.int(27)).sub(&v.pw(2).div(&v.int(72)))
}

/// a_6(1) = -2^(4a)/(27*64) - 2^(2a) 3^(2a)/(27*64*5) + 2^(2a)/(3*64) - 2/243.
fn a6_n1<P: PowView>(v: &P) -> P::C {
    let p2 = v.pw(2);
    let t1 = p2.mul(&p2).div(&v.int(27 * 64)).neg();
    let t2 = v.pw(6).div(&v.int(27 * 64 * 5)).neg();
    let t3 = p2.div(&v.int(3 * 64));
    let t4 = v.int(2).div(&v.int(243)).neg();
    t1.add(&t2).add(&t3).add(&t4)
}

fn dispatch_closed<P: PowView>(v: &P, n: u32, k: u32, alpha_f: f64) -> Result<P::C> {
    let ni = n as i64;
    match k {
        2 => {
            if n == 1 {
                // a_2(1) = -1/3 for every alpha
                Ok(P::C::from_i64(-1).div(&P::C::from_i64(3)))
            } else {
                Ok(a2_general(v, ni))
            }
        }
        4 => {
            if n == 1 {
                Ok(a4_n1(v))
            } else if n >= 3 {
                Ok(a4_general(v, ni))
            } else {
                Err(Error::FormulaFloor { k, n, floor: 3 })
            }
        }
        6 => {
            if n == 1 {
                Ok(a6_n1(v))
            } else if n >= 4 {
                Ok(a6_general(v, ni))
            } else {
                Err(Error::FormulaFloor { k, n, floor: 4 })
            }
        }
        _ => Err(Error::UnsupportedOrder { k, alpha: alpha_f }),
    }
}

/// Closed-form coefficient a_k(alpha, n) for the power family; k is the
/// order in z (even). k in {2, 4, 6} for general alpha (with the validity
/// floors n >= 2, 3, 4 and n = 1 specials); k in {8, 10} only at
/// alpha = 1/2 with floor n >= 4. Exact when 2*alpha is an integer.
pub fn closed_coefficient(alpha: Alpha, n: u32, k: u32) -> Result<CoeffValue> {
    if n == 0 {
        return Err(Error::InvalidFamily("branch index n >= 1".into()));
    }
    let alpha_f = alpha.value();
    if k == 8 || k == 10 {
        if alpha.two_alpha_integer() != Some(1) {
            return Err(Error::UnsupportedOrder { k, alpha: alpha_f });
        }
        if n < 4 {
            return Err(Error::FormulaFloor { k, n, floor: 4 });
        }
        return Ok(CoeffValue::Exact(closed_half_alpha(n, k)?));
    }
    match alpha.two_alpha_integer() {
        Some(p) if p >= 0 => {
            let v = ExactPow { p: p as u32 };
            dispatch_closed(&v, n, k, alpha_f).map(CoeffValue::Exact)
        }
        _ => {
            let v = FloatPow { two_alpha: 2.0 * alpha_f };
            dispatch_closed(&v, n, k, alpha_f).map(CoeffValue::Approx)
        }
    }
}

fn rat_i(x: i64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// The alpha = 1/2 coefficient forms, exact:
/// a_2 = -1/(4n^2-1);
/// a_4 = 1/(4(2n+1)^3) - 1/(4(2n-1)^3);
/// a_6 = -1/((2n+3)(2n+1)^5(2n-1)) + 1/((2n+1)(2n-1)^5(2n-3));
/// a_8, a_10: the degree-8 and degree-10 rational forms.
pub fn closed_half_alpha(n: u32, k: u32) -> Result<Rat> {
    let n = n as i64;
    let two_n = 2 * n;
    match k {
        2 => Ok(-rat_i(1) / rat_i(4 * n * n - 1)),
        4 => {
            if n < 3 {
                return Err(Error::FormulaFloor { k: 4, n: n as u32, floor: 3 });
            }
            Ok(rat_i(1) / rat_i(4 * (two_n + 1).pow(3)) - rat_i(1) / rat_i(4 * (two_n - 1).pow(3)))
        }
        6 => {
            if n < 4 {
                return Err(Error::FormulaFloor { k: 6, n: n as u32, floor: 4 });
            }
            let t1 = Rat::new(big(-1), big(two_n + 3) * big(two_n + 1).pow(5) * big(two_n - 1));
            let t2 = Rat::new(big(1), big(two_n + 1) * big(two_n - 1).pow(5) * big(two_n - 3));
            Ok(t1 + t2)
        }
        8 => {
            if n < 4 {
                return Err(Error::FormulaFloor { k: 8, n: n as u32, floor: 4 });
            }
            let n2 = big(n) * big(n);
            let num = big(-327) - big(16080) * &n2 - big(63136) * n2.pow(2)
                + big(29440) * n2.pow(3)
                + big(39168) * n2.pow(4);
            let den = big(32)
                * big(n - 1)
                * big(n + 1)
                * big(two_n - 3)
                * big(two_n + 3)
                * big(two_n - 1).pow(7)
                * big(two_n + 1).pow(7);
            Ok(Rat::new(num, den))
        }
        10 => {
            if n < 4 {
                return Err(Error::FormulaFloor { k: 10, n: n as u32, floor: 4 });
            }
            let n2 = big(n) * big(n);
            let num = big(3915) + big(280676) * &n2 + big(2496992) * n2.pow(2)
                + big(2635904) * n2.pow(3)
                - big(3111168) * n2.pow(4)
                - big(1158144) * n2.pow(5);
            let den = big(8)
                * big(n - 1)
                * big(n + 1)
                * big(two_n - 3)
                * big(two_n + 3)
                * big(two_n - 5)
                * big(two_n + 5)
                * big(two_n - 1).pow(9)
                * big(two_n + 1).pow(9);
            Ok(Rat::new(num, den))
        }
        _ => Err(Error::UnsupportedOrder { k, alpha: 0.5 }),
    }
}

/// psi(n) = -1/((2n-1)(2n+1)^5(2n+3)): the telescoping generator of
/// a_6(1/2, n) = psi(n) - psi(n-1).
pub fn psi_half(n: u32) -> Rat {
    let n = n as i64;
    Rat::new(big(-1), big(2 * n - 1) * big(2 * n + 1).pow(5) * big(2 * n + 3))
}

/// phi_k(n) with a_k(n) = phi_k(n) - phi_k(n-1); closed forms exist for
/// k = 2 and k = 4:
/// phi_2(n) = -b_n c_n / (2n+1);
/// phi_4(n) = b_n^2 c_n^2/(2n+1)^3
///          - b_n b_{n+1} c_n c_{n+1} / ((2n+1)^2 (4n+4))
///          - b_n b_{n-1} c_n c_{n-1} / (4n (2n+1)^2)
/// (the n = 1 case uses b_0 c_0 = 0).
pub fn phi_closed(family: &OperatorFamily, k: u32, n: u32) -> Result<CoeffValue> {
    if n == 0 {
        return Err(Error::InvalidFamily("phi needs n >= 1".into()));
    }
    // exact path for power families with integer 2*alpha
    if let FamilyKind::Power { alpha } = family.kind() {
        if let Some(p) = alpha.two_alpha_integer() {
            if p >= 0 {
                let p = p as u32;
                let bc = |m: u32| -> Rat {
                    if m == 0 {
                        rat_i(0)
                    } else {
                        Rat::from_integer(BigInt::from(m).pow(p))
                    }
                };
                return phi_from_products(k, n, &bc).map(CoeffValue::Exact);
            }
        }
    }
    let bc = |m: u32| -> f64 { family.b(m) * family.c(m) };
    phi_from_products_f64(k, n, &bc).map(CoeffValue::Approx)
}

fn phi_from_products(k: u32, n: u32, bc: &impl Fn(u32) -> Rat) -> Result<Rat> {
    let ni = n as i64;
    match k {
        2 => Ok(-bc(n) / rat_i(2 * ni + 1)),
        4 => {
            let t1 = bc(n).pow(2) / rat_i((2 * ni + 1).pow(3));
            let t2 = bc(n) * bc(n + 1) / rat_i((2 * ni + 1).pow(2) * (4 * ni + 4));
            let t3 = bc(n) * bc(n - 1) / rat_i(4 * ni * (2 * ni + 1).pow(2));
            Ok(t1 - t2 - t3)
        }
        _ => Err(Error::UnsupportedOrder { k, alpha: f64::NAN }),
    }
}

fn phi_from_products_f64(k: u32, n: u32, bc: &impl Fn(u32) -> f64) -> Result<f64> {
    let nf = n as f64;
    match k {
        2 => Ok(-bc(n) / (2.0 * nf + 1.0)),
        4 => {
            let t1 = bc(n) * bc(n) / (2.0 * nf + 1.0).powi(3);
            let t2 = bc(n) * bc(n + 1) / ((2.0 * nf + 1.0).powi(2) * (4.0 * nf + 4.0));
            let t3 = bc(n) * bc(n - 1) / (4.0 * nf * (2.0 * nf + 1.0).powi(2));
            Ok(t1 - t2 - t3)
        }
        _ => Err(Error::UnsupportedOrder { k, alpha: f64::NAN }),
    }
}

/// Solve the branch equation for branch n through order z^(2 k_max).
pub fn solve_branch_equation(
    family: &OperatorFamily,
    n: u32,
    k_max: u32,
) -> Result<TaylorSeries> {
    solve_branch_equation_with(family, n, k_max, Backend::Auto)
}

pub fn solve_branch_equation_with(
    family: &OperatorFamily,
    n: u32,
    k_max: u32,
    backend: Backend,
) -> Result<TaylorSeries> {
    if n == 0 || k_max == 0 {
        return Err(Error::InvalidFamily("need n >= 1 and k_max >= 1".into()));
    }
    let use_exact = match backend {
        Backend::Exact => true,
        Backend::Float => false,
        Backend::Auto => solver::exact_power_exponent(family).is_some(),
    };
    let (exact, approx) = if use_exact {
        let all = solver::solve_exact(family, n, k_max)?;
        let even: Vec<Rat> = (1..=k_max).map(|k| all[(2 * k - 1) as usize].clone()).collect();
        debug_assert!(all.iter().step_by(2).all(Zero::is_zero));
        let approx = even.iter().map(rat_to_f64).collect();
        (Some(even), approx)
    } else {
        let all = solver::solve_float(family, n, k_max)?;
        let approx: Vec<f64> = (1..=k_max).map(|k| all[(2 * k - 1) as usize].to_f64()).collect();
        (None, approx)
    };
    Ok(TaylorSeries {
        n,
        k_max,
        exact,
        approx,
        base: family.q(n),
        growth_m: family.growth_m(),
        growth_alpha: family.growth_alpha(),
    })
}

/// Raw coefficients a_1 .. a_{max_order} (odd orders included) computed
/// with no evenness assumption; used to exhibit that odd orders vanish.
pub fn solve_all_orders(family: &OperatorFamily, n: u32, max_order: u32) -> Result<Vec<CoeffValue>> {
    let k_max = max_order.div_ceil(2);
    if solver::exact_power_exponent(family).is_some() {
        let all = solver::solve_exact(family, n, k_max)?;
        Ok(all
            .into_iter()
            .take(max_order as usize)
            .map(CoeffValue::Exact)
            .collect())
    } else {
        let all = solver::solve_float(family, n, k_max)?;
        Ok(all
            .into_iter()
            .take(max_order as usize)
            .map(|d| CoeffValue::Approx(d.to_f64()))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    fn half() -> Alpha {
        Alpha::Rational(1, 2)
    }

    fn zero_a() -> Alpha {
        Alpha::Rational(0, 1)
    }

    #[test]
    fn closed_fixtures() {
        // a_2(1) = -1/3 for any alpha
        for a in [zero_a(), half(), Alpha::Real(0.37)] {
            assert!((closed_coefficient(a, 1, 2).unwrap().to_f64() + 1.0 / 3.0).abs() < 1e-15);
        }
        // a_6(1/2, 1) = -1/1215
        let v = closed_coefficient(half(), 1, 6).unwrap();
        assert_eq!(v.exact().unwrap(), &rat(-1, 1215));
        // a_2(0, 2) = 1/3 - 1/5 = 2/15
        let v = closed_coefficient(zero_a(), 2, 2).unwrap();
        assert_eq!(v.exact().unwrap(), &rat(2, 15));
        // a_2(1/2, 3) = -1/35
        let v = closed_coefficient(half(), 3, 2).unwrap();
        assert_eq!(v.exact().unwrap(), &rat(-1, 35));
        assert_eq!(&closed_half_alpha(3, 2).unwrap(), &rat(-1, 35));
    }

    #[test]
    fn formula_floors_enforced() {
        assert!(matches!(
            closed_coefficient(half(), 2, 4),
            Err(Error::FormulaFloor { .. })
        ));
        assert!(matches!(
            closed_coefficient(half(), 3, 6),
            Err(Error::FormulaFloor { .. })
        ));
        assert!(matches!(
            closed_coefficient(zero_a(), 5, 8),
            Err(Error::UnsupportedOrder { .. })
        ));
        assert!(matches!(
            closed_coefficient(half(), 2, 8),
            Err(Error::FormulaFloor { .. })
        ));
    }

    #[test]
    fn half_alpha_forms_match_general_forms() {
        for n in 4..=12u32 {
            for k in [2u32, 4, 6] {
                let g = closed_coefficient(half(), n, k).unwrap();
                let h = closed_half_alpha(n, k).unwrap();
                assert_eq!(g.exact().unwrap(), &h, "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn phi_closed_values() {
        let jc = OperatorFamily::power(half()).unwrap();
        // phi_2(n) = -n/(2n+1); at n = 10: -10/21
        let v = phi_closed(&jc, 2, 10).unwrap();
        assert_eq!(v.exact().unwrap(), &rat(-10, 21));
        let mat = OperatorFamily::power(zero_a()).unwrap();
        let v = phi_closed(&mat, 2, 1).unwrap();
        assert_eq!(v.exact().unwrap(), &rat(-1, 3));
    }

    #[test]
    fn phi_telescopes_to_a2() {
        let jc = OperatorFamily::power(half()).unwrap();
        for n in 2..=50u32 {
            let lhs = phi_closed(&jc, 2, n).unwrap().exact().unwrap()
                - phi_closed(&jc, 2, n - 1).unwrap().exact().unwrap();
            let rhs = closed_coefficient(half(), n, 2).unwrap();
            assert_eq!(&lhs, rhs.exact().unwrap(), "n={n}");
        }
    }

    #[test]
    fn solver_matches_closed_forms_exactly() {
        // oracle equivalence on alpha in {0, 1/2}, n = floor..12, k <= 3
        for alpha in [zero_a(), half()] {
            let fam = OperatorFamily::power(alpha).unwrap();
            for n in 1..=12u32 {
                let ts = solve_branch_equation(&fam, n, 3).unwrap();
                let exact = ts.exact.as_ref().unwrap();
                for (k, floor) in [(2u32, 2u32), (4, 3), (6, 4)] {
                    if n >= floor || n == 1 {
                        let closed = closed_coefficient(alpha, n, k).unwrap();
                        assert_eq!(
                            &exact[(k / 2 - 1) as usize],
                            closed.exact().unwrap(),
                            "alpha={alpha:?} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn solver_matches_half_alpha_high_orders() {
        let fam = OperatorFamily::power(half()).unwrap();
        for n in 4..=8u32 {
            let ts = solve_branch_equation(&fam, n, 5).unwrap();
            let exact = ts.exact.as_ref().unwrap();
            for k in [2u32, 4, 6, 8, 10] {
                let closed = closed_half_alpha(n, k).unwrap();
                assert_eq!(&exact[(k / 2 - 1) as usize], &closed, "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn psi_telescoping() {
        let fam = OperatorFamily::power(half()).unwrap();
        for n in 2..=10u32 {
            let ts = solve_branch_equation(&fam, n, 3).unwrap();
            let a6 = &ts.exact.as_ref().unwrap()[2];
            let expect = psi_half(n) - psi_half(n - 1);
            assert_eq!(a6, &expect, "n={n}");
        }
        // and the n = 1 anchor
        assert_eq!(psi_half(1), rat(-1, 1215));
    }

    #[test]
    fn bounds_and_tail() {
        let jc = OperatorFamily::power(half()).unwrap();
        // Cauchy-type bound at (n=4, k=2): 64 * 4^0 = 64
        let (_, cauchy) = coefficient_bounds(&jc, 4, 2);
        assert!((cauchy - 64.0).abs() < 1e-12);
        // |a_2(4)| = 1/63 <= 64
        let a2 = closed_half_alpha(4, 2).unwrap();
        assert!(rat_to_f64(&a2).abs() <= 64.0);

        // tail at z = 0 vanishes
        assert_eq!(tail_bound_value(1.0, 0.5, 10, 0.0, 2).unwrap(), 0.0);
        // alpha=1/2, n=100, z=1, from_k=2: within the stated envelope
        let t = tail_bound_value(1.0, 0.5, 100, 1.0, 2).unwrap();
        let envelope = 8.0f64.powi(4) / 100.0 / (1.0 - 64.0 / 100.0);
        assert!(t <= envelope * (1.0 + 1e-12), "t={t}, envelope={envelope}");
        // divergence exactly when even the smaller ratio passes 1
        assert!(matches!(
            tail_bound_value(1.0, 0.5, 3, 0.5, 6),
            Err(Error::Divergent { .. })
        ));
        assert!(tail_bound_value(1.0, 0.5, 5, 0.5, 6).is_ok());
    }

    #[test]
    fn odd_orders_exactly_zero_via_all_orders() {
        let fam = OperatorFamily::power(half()).unwrap();
        let all = solve_all_orders(&fam, 3, 8).unwrap();
        for (i, c) in all.iter().enumerate() {
            if (i + 1) % 2 == 1 {
                assert_eq!(c.exact().unwrap(), &rat(0, 1));
            }
        }
    }

    #[test]
    fn coefficient_decay_slopes_alpha_half() {
        // log-log slope of |a_{2k}(n)| vs n across n = 8..64 close to the
        // sharp rates: a2 ~ n^-2, a4 ~ n^-4, a6 ~ n^-8, a8 ~ n^-10,
        // a10 ~ n^-14.
        let fam = OperatorFamily::power(half()).unwrap();
        let ns = [8u32, 16, 32, 64];
        let mut logs: Vec<Vec<f64>> = vec![vec![]; 5];
        for &n in &ns {
            let ts = solve_branch_equation(&fam, n, 5).unwrap();
            for k in 1..=5u32 {
                logs[(k - 1) as usize].push(ts.coeff_f64(k).abs().ln());
            }
        }
        let slope = |ys: &[f64]| {
            let xs: Vec<f64> = ns.iter().map(|n| (*n as f64).ln()).collect();
            let xm = xs.iter().sum::<f64>() / xs.len() as f64;
            let ym = ys.iter().sum::<f64>() / ys.len() as f64;
            let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
            let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
            num / den
        };
        assert!((slope(&logs[0]) + 2.0).abs() < 0.3);
        assert!((slope(&logs[1]) + 4.0).abs() < 0.3);
        assert!((slope(&logs[2]) + 8.0).abs() < 0.4);
        assert!((slope(&logs[3]) + 10.0).abs() < 0.4);
        assert!((slope(&logs[4]) + 14.0).abs() < 0.4);
    }

    #[test]
    fn exact_unavailable_for_irrational_alpha() {
        let fam = OperatorFamily::power(Alpha::Real(0.3)).unwrap();
        assert!(matches!(
            solve_branch_equation_with(&fam, 2, 2, Backend::Exact),
            Err(Error::ExactUnavailable { .. })
        ));
        // float backend agrees with the closed forms at alpha = 0.3
        let ts = solve_branch_equation_with(&fam, 5, 2, Backend::Float).unwrap();
        let a2 = closed_coefficient(Alpha::Real(0.3), 5, 2).unwrap().to_f64();
        let a4 = closed_coefficient(Alpha::Real(0.3), 5, 4).unwrap().to_f64();
        assert!((ts.coeff_f64(1) - a2).abs() < 1e-14 * a2.abs());
        assert!((ts.coeff_f64(2) - a4).abs() < 1e-13 * a4.abs());
    }

    #[test]
    fn every_coefficient_respects_both_bounds() {
        for alpha in [zero_a(), half()] {
            let fam = OperatorFamily::power(alpha).unwrap();
            for n in 1..=10u32 {
                let ts = solve_branch_equation(&fam, n, 5).unwrap();
                for k in 1..=5u32 {
                    let (p8, cauchy) = coefficient_bounds(&fam, n, 2 * k);
                    let a = ts.coeff_f64(k).abs();
                    assert!(a <= p8 * (1.0 + 1e-12), "p8 violated at n={n}, k={k}");
                    assert!(a <= cauchy * (1.0 + 1e-12), "cauchy violated at n={n}, k={k}");
                }
            }
        }
    }
}
