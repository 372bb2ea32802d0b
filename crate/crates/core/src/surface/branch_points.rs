//! Branch points of the spectral surface: zeros of the window discriminant
//! r(z), located by argument-principle counting on a square subdivision and
//! polished by a secant iteration on the closing eigenvalue gap.

use super::discriminant_from_roots;
use crate::eigen::branch::{continue_set, ContinuationOutcome, PathInC};
use crate::eigen::{spectrum, window_set};
use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::matrix::truncate;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct BranchPoint {
    pub z_star: [f64; 2],
    /// Local winding of r around the polished zero (1 for a simple
    /// pair collision).
    pub multiplicity_hint: u32,
    /// The two branch labels that collide, identified by continuation
    /// from z = 0.
    pub colliding_labels: (u32, u32),
    /// False when the zero hugs the search boundary.
    pub high_confidence: bool,
}

impl BranchPoint {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z_star[0], self.z_star[1])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchPointSet {
    pub n: u32,
    pub search_radius: f64,
    pub points: Vec<BranchPoint>,
}

/// The n eigenvalues left of the window line, valid beyond the certified
/// disk as long as they stay separated from the rest of the spectrum.
pub(crate) fn window_roots_extended(
    family: &OperatorFamily,
    z: Complex64,
    n: u32,
) -> Result<Vec<Complex64>> {
    if !family.has_square_diagonal() {
        return Err(Error::InvalidFamily(
            "window tracking is defined for the q_k = k^2 diagonal only".into(),
        ));
    }
    let radius = family.radius(n);
    if z.norm() <= radius * (1.0 + 1e-12) {
        if let Ok(win) = window_set(family, z, n, 1e-9) {
            if win.len() == n as usize {
                return Ok(win);
            }
        }
    }
    // Exploratory regime: n lowest by real part with a separation guard.
    let n_trunc = 64usize.max(6 * n as usize);
    let m = truncate(family, z, n_trunc)?;
    let eigs = spectrum(&m, 1e-10)?.eigenvalues; // sorted by (re, im)
    if eigs.len() < n as usize + 1 {
        return Err(Error::CountMismatch { expected: n, got: eigs.len() as u32 });
    }
    let window: Vec<Complex64> = eigs[..n as usize].to_vec();
    let re_gap = eigs[n as usize].re - window.last().unwrap().re;
    let scale = family.q(n + 1) - family.q(n);
    if re_gap < 0.1 * scale {
        return Err(Error::GridTooCoarse { z });
    }
    Ok(window)
}

/// r(z): discriminant of the degree-n window polynomial, via the
/// root-product form (well scaled for phase tracking).
fn r_value(family: &OperatorFamily, z: Complex64, n: u32) -> Result<Complex64> {
    let roots = window_roots_extended(family, z, n)?;
    Ok(discriminant_from_roots(&roots))
}

/// Winding number of r(z) around a rectangle boundary, by adaptive phase
/// tracking (refine until consecutive phase steps are below pi/4).
fn winding_on_rect(
    family: &OperatorFamily,
    n: u32,
    lo: Complex64,
    hi: Complex64,
) -> Result<i32> {
    let corners = [
        lo,
        Complex64::new(hi.re, lo.im),
        hi,
        Complex64::new(lo.re, hi.im),
        lo,
    ];
    let mut total = 0.0f64;
    for seg in corners.windows(2) {
        total += phase_change_on_segment(family, n, seg[0], seg[1])?;
    }
    let winding = total / std::f64::consts::TAU;
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.25 {
        return Err(Error::GridTooCoarse { z: (lo + hi) * 0.5 });
    }
    Ok(rounded as i32)
}

fn phase_change_on_segment(
    family: &OperatorFamily,
    n: u32,
    a: Complex64,
    b: Complex64,
) -> Result<f64> {
    // (point, r-value) samples; refine between neighbors with large steps
    let mut pts = vec![(0.0f64, r_value(family, a, n)?), (1.0, r_value(family, b, n)?)];
    let mut total_guard = 0usize;
    loop {
        let mut refined = false;
        let mut i = 0;
        while i + 1 < pts.len() {
            let (t0, r0) = pts[i];
            let (t1, r1) = pts[i + 1];
            if r0.norm() == 0.0 || r1.norm() == 0.0 {
                return Err(Error::GridTooCoarse { z: a + (b - a) * t0 });
            }
            let dphi = (r1 / r0).arg().abs();
            if dphi > std::f64::consts::FRAC_PI_4 {
                let tm = 0.5 * (t0 + t1);
                let zm = a + (b - a) * tm;
                pts.insert(i + 1, (tm, r_value(family, zm, n)?));
                refined = true;
                total_guard += 1;
                if total_guard > 20_000 {
                    return Err(Error::GridTooCoarse { z: zm });
                }
            } else {
                i += 1;
            }
        }
        if !refined {
            break;
        }
    }
    let mut acc = 0.0;
    for w in pts.windows(2) {
        acc += (w[1].1 / w[0].1).arg();
    }
    Ok(acc)
}

/// Gap function used for polishing: the squared difference of the two
/// closest window eigenvalues (analytic across a simple pair collision).
fn closest_pair_sq(family: &OperatorFamily, z: Complex64, n: u32) -> Result<Complex64> {
    let roots = window_roots_extended(family, z, n)?;
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = roots[i] - roots[j];
            if d.norm() < best.0 {
                best = (d.norm(), d);
            }
        }
    }
    Ok(best.1 * best.1)
}

/// Secant iteration on the squared closest-pair gap; converges when the
/// gap itself is dead (below gap_target), not merely when steps stall.
fn polish_zero(
    family: &OperatorFamily,
    n: u32,
    center: Complex64,
    size: f64,
    tol: f64,
    gap_target: f64,
) -> Result<Complex64> {
    let mut z0 = center;
    let mut z1 = center + Complex64::new(size * 0.25, size * 0.125);
    let mut f0 = closest_pair_sq(family, z0, n)?;
    let mut f1 = closest_pair_sq(family, z1, n)?;
    let f_target = gap_target * gap_target;
    for _ in 0..80 {
        if f1.norm() <= f_target {
            return Ok(z1);
        }
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            break;
        }
        let z2 = z1 - f1 * (z1 - z0) / denom;
        if !z2.re.is_finite() || !z2.im.is_finite() {
            break;
        }
        if (z2 - z1).norm() < 1e-15 * (1.0 + z1.norm()) {
            // step underflow: nudge to re-seed the secant
            z0 = z1 + Complex64::new(10.0 * tol, -7.0 * tol);
            f0 = closest_pair_sq(family, z0, n)?;
            continue;
        }
        let f2 = closest_pair_sq(family, z2, n)?;
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f2;
    }
    if f1.norm() <= f_target {
        Ok(z1)
    } else {
        Err(Error::GridTooCoarse { z: center })
    }
}

/// Labels of the two branches that collide at z_star, identified by
/// continuing all n branches from 0 most of the way to z_star.
fn colliding_labels(
    family: &OperatorFamily,
    n: u32,
    z_star: Complex64,
    tol: f64,
) -> Result<(u32, u32)> {
    let target = z_star * (1.0 - 1e-3);
    let path = PathInC::open(vec![Complex64::new(0.0, 0.0), target])?;
    let labels: Vec<u32> = (1..=n).collect();
    let outcome = continue_set(family, &labels, &path, tol, |_, _| {})?;
    let values = match outcome {
        ContinuationOutcome::Completed { values } => values,
        ContinuationOutcome::Stopped { values, .. } => values,
    };
    let mut best = (f64::INFINITY, (1u32, 2u32));
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = (values[i] - values[j]).norm();
            if d < best.0 {
                best = (d, (labels[i], labels[j]));
            }
        }
    }
    Ok(best.1)
}

/// Branch points inside the numerically accessible part of the standard
/// localization disk (radius 0.9 R_n).
pub fn find_branch_points(
    family: &OperatorFamily,
    n: u32,
    grid_density: u32,
    tol: f64,
) -> Result<BranchPointSet> {
    find_branch_points_in(family, n, 0.9 * family.radius(n), grid_density, tol)
}

/// Branch points inside |z| <= radius. Beyond the certified disk the
/// window is tracked by its real-part ordering; labels still come from
/// continuation so the reported collisions are exploratory but checkable.
pub fn find_branch_points_in(
    family: &OperatorFamily,
    n: u32,
    radius: f64,
    grid_density: u32,
    tol: f64,
) -> Result<BranchPointSet> {
    if n < 2 {
        return Err(Error::InvalidFamily("branch points need n >= 2".into()));
    }
    if grid_density < 2 {
        return Err(Error::GridTooCoarse { z: Complex64::new(0.0, 0.0) });
    }
    let mut queue: Vec<(Complex64, f64)> = Vec::new(); // (center, half-size)
    let step = 2.0 * radius / grid_density as f64;
    // Deterministic grid offset: zeros of r sit on the symmetry axes for
    // real families, and an axis-aligned grid would put them exactly on
    // shared cell edges where winding counts are ambiguous.
    let lo_x = -radius - 0.2371 * step;
    let lo_y = -radius - 0.1523 * step;
    let mut cx = lo_x + step / 2.0;
    while cx - step / 2.0 <= radius {
        let mut cy = lo_y + step / 2.0;
        while cy - step / 2.0 <= radius {
            let center = Complex64::new(cx, cy);
            if center.norm() <= radius + step {
                queue.push((center, step / 2.0));
            }
            cy += step;
        }
        cx += step;
    }

    let mut found: Vec<Complex64> = Vec::new();
    let refine_floor = (tol * 64.0).max(radius * 0.02);
    // Polish until the pair gap is an order below the collision threshold
    // used for validation. Much tighter targets are unreachable: the gap
    // grows like sqrt(|z - z*|), so gap ~ 1e-7 already corresponds to a
    // z-distance near one ulp of |z*|.
    let gap_tol = 1e-6 * family.q(n + 1).max(1.0);
    let gap_target = gap_tol * 0.1;
    while let Some((center, half)) = queue.pop() {
        let lo = center - Complex64::new(half, half);
        let hi = center + Complex64::new(half, half);
        let subdivide = match winding_on_rect(family, n, lo, hi) {
            Ok(0) => continue,
            Ok(_) => half > refine_floor,
            // boundary passing too close to a zero: split while we can,
            // polish directly once at the floor
            Err(Error::GridTooCoarse { .. }) => half > refine_floor,
            Err(e) => return Err(e),
        };
        if subdivide {
            let q = half / 2.0;
            for dx in [-q, q] {
                for dy in [-q, q] {
                    queue.push((center + Complex64::new(dx, dy), q));
                }
            }
            continue;
        }
        let z = match polish_zero(family, n, center, half, tol, gap_target) {
            Ok(z) => z,
            Err(_) => continue,
        };
        // genuine collision check plus locality and region membership
        let gap2 = closest_pair_sq(family, z, n)?.norm();
        if gap2.sqrt() > gap_tol || (z - center).norm() > 6.0 * half {
            continue;
        }
        if z.norm() > radius * (1.0 + 1e-6) {
            continue;
        }
        if found.iter().all(|p| (p - z).norm() > 10.0 * tol.max(1e-12)) {
            found.push(z);
        }
    }

    found.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });

    let mut points = Vec::with_capacity(found.len());
    for z in found {
        let labels = colliding_labels(family, n, z, tol.max(1e-10))?;
        // local winding of r for the multiplicity hint
        let h = (z.norm() * 1e-3).max(50.0 * tol);
        let lo = z - Complex64::new(h, h);
        let hi = z + Complex64::new(h, h);
        let mult = winding_on_rect(family, n, lo, hi).unwrap_or(1).unsigned_abs();
        points.push(BranchPoint {
            z_star: [z.re, z.im],
            multiplicity_hint: mult,
            colliding_labels: labels,
            high_confidence: z.norm() <= 0.95 * radius,
        });
    }
    Ok(BranchPointSet { n, search_radius: radius, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Alpha;

    fn mathieu() -> OperatorFamily {
        OperatorFamily::power(Alpha::Rational(0, 1)).unwrap()
    }

    #[test]
    fn tiny_disk_around_origin_is_empty() {
        // r(0) != 0, so a small search region holds no branch points.
        let set = find_branch_points_in(&mathieu(), 2, 0.05, 3, 1e-9).unwrap();
        assert!(set.points.is_empty());
    }

    #[test]
    fn branch_point_sets_nest_with_window_size() {
        // every zero of the 2-window discriminant reappears for the
        // 3-window (the colliding pair is still a pair there)
        let s2 = find_branch_points_in(&mathieu(), 2, 2.0, 5, 1e-9).unwrap();
        let s3 = find_branch_points_in(&mathieu(), 3, 2.0, 5, 1e-9).unwrap();
        assert!(!s2.points.is_empty());
        for p in &s2.points {
            assert!(
                s3.points.iter().any(|q| (q.z() - p.z()).norm() < 1e-8),
                "point {} of the 2-window set missing from the 3-window set",
                p.z()
            );
        }
    }

    #[test]
    fn mathieu_pair_collision_found_in_extended_disk() {
        // The first collision of the two lowest branches sits well outside
        // Delta_2; search an exploratory disk that contains it.
        let set = find_branch_points_in(&mathieu(), 2, 2.2, 6, 1e-9).unwrap();
        assert!(!set.points.is_empty(), "no branch points found");
        // +- pairs and conjugate pairs
        for p in &set.points {
            let z = p.z();
            assert!(
                set.points.iter().any(|q| (q.z() + z).norm() < 1e-5),
                "missing -z partner of {z}"
            );
            assert!(
                set.points.iter().any(|q| (q.z() - z.conj()).norm() < 1e-5),
                "missing conjugate partner of {z}"
            );
            assert_eq!(p.colliding_labels, (1, 2));
            assert_eq!(p.multiplicity_hint, 1);
        }
        // the gap at z_star collapses; at z_star/2 it stays open
        let z0 = set.points[0].z();
        let gap_at = |z: Complex64| {
            let roots = window_roots_extended(&mathieu(), z, 2).unwrap();
            (roots[0] - roots[1]).norm()
        };
        assert!(gap_at(z0) < 1e-5, "gap at z_star = {}", gap_at(z0));
        assert!(gap_at(z0 * 0.5) > 1e-2);
    }
}
