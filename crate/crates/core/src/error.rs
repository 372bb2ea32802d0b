use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("growth certificate (M={m}, alpha={alpha}) violated at k={k}: |entry| = {value}")]
    BadCertificate { m: f64, alpha: f64, k: u32, value: f64 },
    #[error("lambda {0} lies outside the admissible region H_n \\ K_n for n={1}")]
    LambdaOutsideDomain(Complex64, u32),
    #[error("|z| = {z_abs} exceeds the localization radius R_{n} = {radius}")]
    ZOutsideDisk { z_abs: f64, n: u32, radius: f64 },
    #[error("|z| = {z_abs} exceeds the largest admissible radius {radius}")]
    ZTooLarge { z_abs: f64, radius: f64 },
    #[error("eigenvalue iteration failed to converge (dimension {dim})")]
    NoConvergence { dim: usize },
    #[error("expected {expected} eigenvalues in the window, found {got}")]
    CountMismatch { expected: u32, got: u32 },
    #[error("contour quadrature failed to stabilize (last error {last_err})")]
    QuadratureFailure { last_err: f64 },
    #[error("branches too close at z = {z}: gap = {gap}")]
    NearCollision { z: Complex64, gap: f64 },
    #[error("ambiguous branch match at z = {z}: two candidates within acceptance radius")]
    AmbiguousMatch { z: Complex64 },
    #[error("argument-principle winding ambiguous near {z}; increase grid density")]
    GridTooCoarse { z: Complex64 },
    #[error("no closed-form coefficient for order k={k} at alpha={alpha}")]
    UnsupportedOrder { k: u32, alpha: f64 },
    #[error("closed form for order k={k} requires n >= {floor}, got n={n}")]
    FormulaFloor { k: u32, n: u32, floor: u32 },
    #[error("exact arithmetic unavailable: 2*alpha = {two_alpha} is not an integer")]
    ExactUnavailable { two_alpha: f64 },
    #[error("coefficient tail diverges at |z| = {z_abs} (needs |z| < {radius})")]
    Divergent { z_abs: f64, radius: f64 },
    #[error("alpha = {0} outside the admissible range for this operation")]
    AlphaOutOfRange(f64),
    #[error("sequence b_k c_k / k has no limit at probe scale")]
    NoLimit,
    #[error("off-diagonal sequences are not strictly decreasing (first violation at k={k})")]
    NotMonotone { k: u32 },
    #[error("least-squares basis ill-conditioned (cond = {cond:.3e})")]
    IllConditionedFit { cond: f64 },
    #[error("path invalid: {0}")]
    BadPath(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
