//! Monodromy of eigenvalue branches: the permutation of branch labels
//! induced by analytic continuation around a closed path based at 0.

use crate::eigen::branch::{continue_set, ContinuationOutcome, PathInC};
use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct MonodromyResult {
    pub n_max: u32,
    /// One-line permutation: branch k ends on branch permutation[k-1].
    pub permutation: Vec<u32>,
    /// Every label above this index is provably fixed (the path stays
    /// inside its localization disk).
    pub tail_fixed_beyond: u32,
    /// |sum_k E_k(end) - sum_k E_k(start)| over the tracked labels: the
    /// single-valuedness defect of the symmetrized partial sum.
    pub partial_sum_defect: f64,
}

impl MonodromyResult {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, p)| *p == i as u32 + 1)
    }

    pub fn inverse(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.permutation.len()];
        for (i, p) in self.permutation.iter().enumerate() {
            inv[(*p - 1) as usize] = i as u32 + 1;
        }
        inv
    }
}

/// Smallest index m whose localization disk contains the whole path.
fn tail_fixed_index(family: &OperatorFamily, max_abs: f64) -> u32 {
    for m in 1..=100_000u32 {
        if family.radius(m) >= max_abs {
            return m;
        }
    }
    u32::MAX
}

/// Continue all branches 1..=n_max around the closed path and read off the
/// label permutation from the final values.
pub fn monodromy(
    family: &OperatorFamily,
    path: &PathInC,
    n_max: u32,
    tol: f64,
) -> Result<MonodromyResult> {
    if !path.closed {
        return Err(Error::BadPath("monodromy needs a closed path".into()));
    }
    if path.start().norm() > 1e-12 {
        return Err(Error::BadPath("monodromy paths are based at z = 0".into()));
    }
    let labels: Vec<u32> = (1..=n_max).collect();
    let start_sum: Complex64 = labels.iter().map(|k| Complex64::new(family.q(*k), 0.0)).sum();
    let outcome = continue_set(family, &labels, path, tol, |_, _| {})?;
    let values = match outcome {
        ContinuationOutcome::Completed { values } => values,
        ContinuationOutcome::Stopped { z_bad, gap, .. } => {
            return Err(Error::NearCollision { z: z_bad, gap });
        }
    };
    // match final values back to the diagonal entries
    let mut permutation = vec![0u32; n_max as usize];
    let mut taken = vec![false; n_max as usize];
    for (i, v) in values.iter().enumerate() {
        let mut best = (f64::INFINITY, 0usize);
        for j in 0..n_max as usize {
            let d = (v - family.q(j as u32 + 1)).norm();
            if d < best.0 {
                best = (d, j);
            }
        }
        let scale = family.q(best.1 as u32 + 1).max(1.0);
        if best.0 > 1e-5 * scale || taken[best.1] {
            return Err(Error::AmbiguousMatch { z: path.start() });
        }
        taken[best.1] = true;
        permutation[i] = best.1 as u32 + 1;
    }
    let end_sum: Complex64 = values.iter().sum();
    Ok(MonodromyResult {
        n_max,
        permutation,
        tail_fixed_beyond: tail_fixed_index(family, path.max_abs()),
        partial_sum_defect: (end_sum - start_sum).norm(),
    })
}

/// Build a closed loop based at 0 that travels to the vicinity of a
/// center, circles it, and returns: the conjugated small-circle loop used
/// to isolate one branch point.
pub fn loop_around(center: Complex64, radius: f64, segments: u32) -> Result<PathInC> {
    let dir = center / center.norm();
    let approach = center - dir * radius;
    let mut pts = vec![Complex64::new(0.0, 0.0), approach];
    for i in 1..=segments {
        let th = std::f64::consts::TAU * i as f64 / segments as f64;
        // circle around the center starting from the approach point
        let offset = (approach - center) * Complex64::new(th.cos(), th.sin());
        pts.push(center + offset);
    }
    pts.push(approach);
    pts.push(Complex64::new(0.0, 0.0));
    // dedup consecutive equals (the circle closes on the approach point)
    pts.dedup_by(|a, b| (*a - *b).norm() < 1e-15);
    PathInC::closed_loop(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Alpha;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mathieu() -> OperatorFamily {
        OperatorFamily::power(Alpha::Rational(0, 1)).unwrap()
    }

    #[test]
    fn small_loop_is_identity() {
        let path = PathInC::closed_loop(vec![
            c(0.0, 0.0),
            c(0.1, 0.0),
            c(0.1, 0.1),
            c(0.0, 0.1),
        ])
        .unwrap();
        let m = monodromy(&mathieu(), &path, 4, 1e-9).unwrap();
        assert!(m.is_identity());
        assert!(m.partial_sum_defect < 1e-8);
        assert_eq!(m.tail_fixed_beyond, 2); // R_1 = 1/8 < max|z| <= R_2
    }

    #[test]
    fn loop_around_known_collision_is_transposition() {
        // the first pair collision of the Mathieu family sits near 1.73 i
        let fam = mathieu();
        let set = crate::surface::find_branch_points_in(&fam, 2, 2.0, 5, 1e-9).unwrap();
        let upper = set
            .points
            .iter()
            .find(|p| p.z().im > 0.0)
            .expect("upper half-plane branch point");
        let z_star = upper.z();
        let path = loop_around(z_star, 0.15, 12).unwrap();
        let m = monodromy(&fam, &path, 4, 1e-9).unwrap();
        assert_eq!(m.permutation, vec![2, 1, 3, 4]);
        assert!(m.partial_sum_defect < 1e-8);

        // a loop avoiding every branch point is the identity
        let quiet = PathInC::closed_loop(vec![
            c(0.0, 0.0),
            c(0.4, -0.3),
            c(0.8, 0.0),
            c(0.4, 0.3),
        ])
        .unwrap();
        let m = monodromy(&fam, &quiet, 4, 1e-9).unwrap();
        assert!(m.is_identity());
    }
}
