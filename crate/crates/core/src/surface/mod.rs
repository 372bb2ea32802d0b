//! The spectral Riemann surface machinery: the characteristic polynomial
//! of the window eigenvalues, its discriminant, branch-point location by
//! the argument principle, monodromy permutations, and the sign-pattern
//! irreducibility certificates.

pub mod branch_points;
pub mod irreducibility;
pub mod monodromy;

use crate::eigen::{power_sum_sigma, window_eigenvalues, SigmaMethod};
use crate::error::Result;
use crate::family::OperatorFamily;
use num_complex::Complex64;

pub use branch_points::{find_branch_points, find_branch_points_in, BranchPoint, BranchPointSet};
pub use irreducibility::{
    decreasing_family_certificate, irreducibility_certificate, IrreducibilityReport, Verdict,
};
pub use monodromy::{monodromy, MonodromyResult};

/// Monic characteristic polynomial of the n window eigenvalues at z.
#[derive(Debug, Clone)]
pub struct CharPolyAtZ {
    pub n: u32,
    pub z: Complex64,
    /// c_0 .. c_n with c_n = 1.
    pub coefficients: Vec<Complex64>,
    /// The window eigenvalues the polynomial annihilates.
    pub roots: Vec<Complex64>,
    /// Resultant of c and its lambda-derivative.
    pub discriminant_value: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharPolyMethod {
    /// Expand prod (lambda - E_k) over the window eigenvalues.
    Product,
    /// Power sums via contour integrals, then Newton's identities.
    Newton,
}

/// Expand a monic polynomial from its roots.
pub(crate) fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Characteristic polynomial of the window at z by the chosen route.
pub fn char_poly(
    family: &OperatorFamily,
    z: Complex64,
    n: u32,
    method: CharPolyMethod,
) -> Result<CharPolyAtZ> {
    let roots = window_eigenvalues(family, z, n, 1e-10)?;
    let coefficients = match method {
        CharPolyMethod::Product => poly_from_roots(&roots),
        CharPolyMethod::Newton => {
            let mut sigma = Vec::with_capacity(n as usize);
            for j in 1..=n {
                sigma.push(power_sum_sigma(family, z, j, n, SigmaMethod::Contour)?);
            }
            newton_coefficients(&sigma)
        }
    };
    let discriminant_value = discriminant(&coefficients);
    Ok(CharPolyAtZ { n, z, coefficients, roots, discriminant_value })
}

/// Elementary symmetric polynomials from power sums (Newton's identities),
/// assembled into monic polynomial coefficients c_0..c_n.
pub(crate) fn newton_coefficients(sigma: &[Complex64]) -> Vec<Complex64> {
    let n = sigma.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut sign = 1.0;
        for i in 1..=j {
            acc += e[j - i] * sigma[i - 1] * sign;
            sign = -sign;
        }
        e[j] = acc / j as f64;
    }
    // c_j = (-1)^(n-j) e_{n-j}
    (0..=n)
        .map(|j| {
            let s = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            e[n - j] * s
        })
        .collect()
}

/// Resultant of the monic polynomial c and its derivative c', via the
/// Sylvester determinant. Vanishes exactly when c has a multiple root.
pub fn discriminant(coefficients: &[Complex64]) -> Complex64 {
    let n = coefficients.len() - 1;
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // derivative coefficients d_0..d_{n-1}
    let deriv: Vec<Complex64> = (1..=n)
        .map(|j| coefficients[j] * j as f64)
        .collect();
    sylvester_resultant(coefficients, &deriv)
}

/// Same resultant computed from the roots:
/// Res(c, c') = (-1)^(n(n-1)/2) prod_{i<j} (E_i - E_j)^2 for monic c.
pub fn discriminant_from_roots(roots: &[Complex64]) -> Complex64 {
    let n = roots.len();
    let mut prod = Complex64::new(1.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = roots[i] - roots[j];
            prod *= d * d;
        }
    }
    if (n * (n - 1) / 2) % 2 == 1 {
        prod = -prod;
    }
    prod
}

/// Sylvester resultant of p (degree m) and q (degree l) by dense LU.
/// Coefficients are ordered low-to-high.
pub(crate) fn sylvester_resultant(p: &[Complex64], q: &[Complex64]) -> Complex64 {
    let m = p.len() - 1;
    let l = q.len() - 1;
    let size = m + l;
    if size == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut a = vec![Complex64::new(0.0, 0.0); size * size];
    // l rows of p's coefficients (high-to-low), then m rows of q's
    for r in 0..l {
        for (i, &c) in p.iter().rev().enumerate() {
            a[r * size + r + i] = c;
        }
    }
    for r in 0..m {
        for (i, &c) in q.iter().rev().enumerate() {
            a[(l + r) * size + r + i] = c;
        }
    }
    // LU with partial pivoting; determinant = prod pivots * sign
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..size {
        let mut piv = k;
        let mut best = a[k * size + k].norm();
        for r in k + 1..size {
            let v = a[r * size + k].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            for c in 0..size {
                a.swap(k * size + c, piv * size + c);
            }
            det = -det;
        }
        let pivot = a[k * size + k];
        det *= pivot;
        for r in k + 1..size {
            let f = a[r * size + k] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for c in k..size {
                let v = a[k * size + c];
                a[r * size + c] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Alpha;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jc() -> OperatorFamily {
        OperatorFamily::power(Alpha::Rational(1, 2)).unwrap()
    }

    #[test]
    fn char_poly_at_zero_small_n() {
        let p = char_poly(&jc(), c64(0.0, 0.0), 2, CharPolyMethod::Product).unwrap();
        // lambda^2 - 5 lambda + 4
        assert!((p.coefficients[0] - 4.0).norm() < 1e-8);
        assert!((p.coefficients[1] + 5.0).norm() < 1e-8);
        assert!((p.coefficients[2] - 1.0).norm() < 1e-12);

        let p = char_poly(&jc(), c64(0.0, 0.0), 3, CharPolyMethod::Product).unwrap();
        // lambda^3 - 14 lambda^2 + 49 lambda - 36
        let expect = [-36.0, 49.0, -14.0, 1.0];
        for (a, b) in p.coefficients.iter().zip(expect) {
            assert!((a - b).norm() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn product_and_newton_agree() {
        // stay inside Delta_3 (R_3 ~ 0.2165 at alpha = 1/2)
        let z = c64(0.15, 0.05);
        let a = char_poly(&jc(), z, 3, CharPolyMethod::Product).unwrap();
        let b = char_poly(&jc(), z, 3, CharPolyMethod::Newton).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((x - y).norm() < 1e-9 * x.norm().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn discriminant_routes_agree() {
        let roots = [c64(1.0, 0.0), c64(4.0, 0.0)];
        let coeffs = poly_from_roots(&roots);
        let d1 = discriminant(&coeffs);
        let d2 = discriminant_from_roots(&roots);
        // (1-4)^2 = 9 with normalization (-1)^1
        assert!((d2 - (-9.0)).norm() < 1e-12);
        assert!((d1 - d2).norm() < 1e-9);
    }

    #[test]
    fn double_root_kills_discriminant() {
        let coeffs = poly_from_roots(&[c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(discriminant(&coeffs).norm() < 1e-12);
    }

    #[test]
    fn r_at_zero_nonzero_for_simple_squares() {
        for n in 2..=12u32 {
            let roots: Vec<Complex64> = (1..=n).map(|k| c64((k * k) as f64, 0.0)).collect();
            let d = discriminant_from_roots(&roots);
            assert!(d.norm() > 0.0 && d.norm().is_finite(), "n={n}");
            let via_sylvester = discriminant(&poly_from_roots(&roots));
            assert!(
                (via_sylvester - d).norm() < 1e-6 * d.norm(),
                "n={n}: {via_sylvester} vs {d}"
            );
        }
    }

    #[test]
    fn random_z_discriminant_consistency() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [3u32, 5, 8] {
            let r = jc().radius(n);
            for _ in 0..3 {
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let rad: f64 = rng.gen_range(0.0..r * 0.9);
                let z = c64(rad * th.cos(), rad * th.sin());
                let p = char_poly(&jc(), z, n, CharPolyMethod::Product).unwrap();
                let d2 = discriminant_from_roots(&p.roots);
                assert!(
                    (p.discriminant_value - d2).norm() <= 1e-6 * d2.norm(),
                    "n={n} z={z}: {} vs {d2}",
                    p.discriminant_value
                );
            }
        }
    }
}
