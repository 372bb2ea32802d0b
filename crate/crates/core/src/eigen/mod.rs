//! Spectra of truncated pencils: full QR spectra with residual
//! certificates, certified eigenvalue windows, power sums over the window
//! by two independent routes, and branch continuation along paths.

pub mod branch;
pub mod contour;
pub mod qr;
pub mod tridiag;

use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::matrix::{truncate, TruncatedMatrix};
use crate::regions::{Region, Regions};
use num_complex::Complex64;

pub use branch::{continue_branch, BranchStatus, EigenBranch, PathInC};
pub use tridiag::{refine_eigenvalue, RefinedEigenvalue};

/// Largest truncation dimension the dense QR path will attempt.
pub const MAX_TRUNCATION: usize = 4096;

/// The full spectrum of one truncated pencil.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub z: Complex64,
    pub n: usize,
    /// All N eigenvalues, sorted by real part then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Largest relative residual ||(A - lambda) v|| / ||A|| observed on the
    /// inverse-iteration spot checks.
    pub residual_tol: f64,
}

pub(crate) fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// All eigenvalues of the truncated matrix with a residual certificate.
pub fn spectrum(matrix: &TruncatedMatrix, tol: f64) -> Result<SpectrumResult> {
    if matrix.dim == 0 || tol <= 0.0 {
        return Err(Error::InvalidFamily("spectrum needs N >= 1 and tol > 0".into()));
    }
    let mut ws = qr::HessWorkspace::from_tridiagonal(matrix);
    let mut eigs = qr::eigenvalues(&mut ws)?;
    sort_complex(&mut eigs);

    // Spot-check residuals by inverse iteration on the original matrix.
    let norm = matrix.norm_estimate().max(1.0);
    let samples = 8.min(eigs.len());
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let idx = s * (eigs.len() - 1) / samples.max(1);
        let res = tridiag::certify_residual(matrix, eigs[idx]);
        worst = worst.max(res / norm);
    }
    Ok(SpectrumResult {
        z: matrix.z,
        n: matrix.dim,
        eigenvalues: eigs,
        residual_tol: worst.max(f64::EPSILON),
    })
}

/// Multiset Hausdorff distance between two point sets.
pub(crate) fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_way = |xs: &[Complex64], ys: &[Complex64]| -> f64 {
        xs.iter()
            .map(|x| {
                ys.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    one_way(a, b).max(one_way(b, a))
}

/// Truncation large enough that the tail beyond N/2 is certified inert:
/// |z| * 2M max(2, 2^alpha) (N/2)^(alpha-1) < 1.
fn certified_start_truncation(family: &OperatorFamily, z: Complex64, n: u32) -> usize {
    let mut big_n = 64usize.max(4 * n as usize);
    let m = family.growth_m();
    let alpha = family.growth_alpha();
    let coef = 2.0 * m * 2.0f64.max(2.0f64.powf(alpha));
    while alpha < 1.0
        && z.norm() * coef * ((big_n / 2) as f64).powf(alpha - 1.0) >= 1.0
        && big_n < MAX_TRUNCATION
    {
        big_n *= 2;
    }
    big_n
}

/// Exactly the eigenvalues inside the window W_n, for |z| <= R_n, found by
/// doubling the truncation until the window set is stable in Hausdorff
/// distance. Exactly n values are returned (sorted), anything else is an
/// error.
pub fn window_eigenvalues(
    family: &OperatorFamily,
    z: Complex64,
    n: u32,
    tol: f64,
) -> Result<Vec<Complex64>> {
    let radius = family.radius(n);
    if z.norm() > radius * (1.0 + 1e-12) {
        return Err(Error::ZOutsideDisk { z_abs: z.norm(), n, radius });
    }
    let window = window_set(family, z, n, tol)?;
    if window.len() != n as usize {
        return Err(Error::CountMismatch { expected: n, got: window.len() as u32 });
    }
    Ok(window)
}

/// The stabilized window set without the count check (callers that probe
/// beyond the certified disk use this through the surface module).
pub(crate) fn window_set(
    family: &OperatorFamily,
    z: Complex64,
    n: u32,
    tol: f64,
) -> Result<Vec<Complex64>> {
    if !family.has_square_diagonal() {
        return Err(Error::InvalidFamily(
            "the counting window is defined for the q_k = k^2 diagonal only".into(),
        ));
    }
    let regions = Regions::new(family, n);
    let mut big_n = certified_start_truncation(family, z, n);
    let mut prev: Option<Vec<Complex64>> = None;
    loop {
        let m = truncate(family, z, big_n)?;
        let spec = spectrum(&m, tol)?;
        let mut win: Vec<Complex64> = spec
            .eigenvalues
            .iter()
            .copied()
            .filter(|lam| regions.contains(*lam, Region::WindowW))
            .collect();
        sort_complex(&mut win);
        if let Some(p) = &prev {
            if win.len() == p.len() && hausdorff(&win, p) < tol {
                return Ok(win);
            }
        }
        prev = Some(win);
        if big_n >= MAX_TRUNCATION {
            return Err(Error::NoConvergence { dim: big_n });
        }
        big_n = (big_n * 2).min(MAX_TRUNCATION);
    }
}

/// Method selector for window power sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMethod {
    /// Sum lambda^j over the window eigenvalues.
    Eig,
    /// Boundary integral of lambda^j tr (lambda - A)^{-1} over the window
    /// rectangle by adaptive Gauss-Legendre quadrature.
    Contour,
}

/// Power sum sigma_j(z) of the n window eigenvalues, 1 <= j <= n.
pub fn power_sum_sigma(
    family: &OperatorFamily,
    z: Complex64,
    j: u32,
    n: u32,
    method: SigmaMethod,
) -> Result<Complex64> {
    if j < 1 || j > n {
        return Err(Error::InvalidFamily(format!("sigma_j needs 1 <= j <= n, got j={j}, n={n}")));
    }
    match method {
        SigmaMethod::Eig => {
            let win = window_eigenvalues(family, z, n, 1e-10)?;
            Ok(win.iter().map(|lam| lam.powu(j)).sum())
        }
        SigmaMethod::Contour => {
            if !family.has_square_diagonal() {
                return Err(Error::InvalidFamily(
                    "the window contour is defined for the q_k = k^2 diagonal only".into(),
                ));
            }
            let radius = family.radius(n);
            if z.norm() > radius * (1.0 + 1e-12) {
                return Err(Error::ZOutsideDisk { z_abs: z.norm(), n, radius });
            }
            let big_n = certified_start_truncation(family, z, n);
            let m = truncate(family, z, big_n)?;
            let nf = n as f64;
            let n2 = nf * nf;
            let corners = [
                Complex64::new(-nf, -nf),
                Complex64::new(n2 + nf, -nf),
                Complex64::new(n2 + nf, nf),
                Complex64::new(-nf, nf),
            ];
            let tol = 1e-10 * (n2 + nf).powi(j as i32).max(1.0);
            let mut integrand = |lam: Complex64| -> Result<Complex64> {
                let (tr, min_piv) = tridiag::resolvent_trace(&m, lam);
                if min_piv < 1e-8 {
                    return Err(Error::QuadratureFailure { last_err: min_piv });
                }
                Ok(lam.powu(j) * tr)
            };
            let mut total = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                total += contour::integrate_segment(
                    &mut integrand,
                    corners[i],
                    corners[(i + 1) % 4],
                    tol,
                )?;
            }
            Ok(total / Complex64::new(0.0, 2.0 * std::f64::consts::PI))
        }
    }
}
