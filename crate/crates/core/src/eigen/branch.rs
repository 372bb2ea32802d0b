//! Analytic continuation of labeled eigenvalue branches along paths in the
//! z-plane, with adaptive stepping and collision detection. Branch labels
//! are only meaningful through continuation from the path start (normally
//! z = 0, where E_n = q_n).

use crate::error::{Error, Result};
use crate::family::OperatorFamily;
use crate::matrix::truncate;
use num_complex::Complex64;

/// Piecewise-linear path in the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PathInC {
    pub waypoints: Vec<Complex64>,
    pub closed: bool,
}

impl PathInC {
    pub fn open(waypoints: Vec<Complex64>) -> Result<Self> {
        Self::validate(&waypoints)?;
        Ok(PathInC { waypoints, closed: false })
    }

    /// Closed loop; the first waypoint is appended at the end when missing.
    pub fn closed_loop(mut waypoints: Vec<Complex64>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::BadPath("closed path needs at least two waypoints".into()));
        }
        if (waypoints[0] - waypoints[waypoints.len() - 1]).norm() > 0.0 {
            waypoints.push(waypoints[0]);
        }
        Self::validate(&waypoints)?;
        Ok(PathInC { waypoints, closed: true })
    }

    fn validate(waypoints: &[Complex64]) -> Result<()> {
        if waypoints.is_empty() {
            return Err(Error::BadPath("path needs at least one waypoint".into()));
        }
        for w in waypoints.windows(2) {
            if (w[0] - w[1]).norm() == 0.0 {
                return Err(Error::BadPath("consecutive waypoints must be distinct".into()));
            }
        }
        Ok(())
    }

    pub fn start(&self) -> Complex64 {
        self.waypoints[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.waypoints.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn total_length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// JSON wire format: array of [re, im] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .waypoints
            .iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>())
    }

    pub fn from_json(value: &serde_json::Value, closed: bool) -> Result<Self> {
        let pairs: Vec<[f64; 2]> = serde_json::from_value(value.clone())
            .map_err(|e| Error::BadPath(format!("expected [[re, im], ...]: {e}")))?;
        let pts = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        if closed {
            Self::closed_loop(pts)
        } else {
            Self::open(pts)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchStatus {
    Ok,
    /// Continuation stopped because the tracked branch came within 10*tol
    /// of another eigenvalue.
    NearCollision { z_bad: Complex64, gap: f64 },
}

/// One continued eigenvalue branch.
#[derive(Debug, Clone)]
pub struct EigenBranch {
    pub n: u32,
    pub path: PathInC,
    pub samples: Vec<(Complex64, Complex64)>,
    pub status: BranchStatus,
}

impl EigenBranch {
    pub fn final_value(&self) -> Complex64 {
        self.samples.last().map(|(_, e)| *e).unwrap_or_default()
    }
}

pub(crate) enum ContinuationOutcome {
    Completed { values: Vec<Complex64> },
    Stopped { z_bad: Complex64, gap: f64, values: Vec<Complex64> },
}

/// Continue the labeled set of branches along the path. `on_sample` sees
/// every accepted step (z, values-in-label-order).
pub(crate) fn continue_set<F>(
    family: &OperatorFamily,
    labels: &[u32],
    path: &PathInC,
    tol: f64,
    mut on_sample: F,
) -> Result<ContinuationOutcome>
where
    F: FnMut(Complex64, &[Complex64]),
{
    if labels.is_empty() {
        return Err(Error::BadPath("no branch labels to continue".into()));
    }
    let max_label = *labels.iter().max().unwrap();
    let mut n_trunc = 64usize.max(8 * max_label as usize);

    // Stability of the starting values under one truncation doubling.
    let z0 = path.start();
    let mut values = loop {
        let v1 = initial_values(family, z0, labels, n_trunc)?;
        let v2 = initial_values(family, z0, labels, n_trunc * 2)?;
        let drift = v1
            .iter()
            .zip(&v2)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if drift < tol * 0.1 || n_trunc >= 1024 {
            break v2;
        }
        n_trunc *= 2;
    };
    n_trunc *= 2; // continue at the finer, verified truncation

    on_sample(z0, &values);

    let mut z = z0;
    let mut prev: Option<(Complex64, Vec<Complex64>)> = None;

    for seg in path.waypoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let seg_len = (b - a).norm();
        let dir = (b - a) / seg_len;
        let mut s = (z - a).norm(); // position along the segment
        let min_step = seg_len * 1e-9;

        while s < seg_len - min_step {
            let spec_now = spectrum_sorted(family, z, n_trunc)?;
            let gaps = gaps_for(&values, &spec_now);
            let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
            if min_gap < 10.0 * tol {
                return Ok(ContinuationOutcome::Stopped { z_bad: z, gap: min_gap, values });
            }

            // Derivative estimates from the last accepted step.
            let derivs: Vec<f64> = match &prev {
                Some((zp, vp)) if (z - zp).norm() > 0.0 => values
                    .iter()
                    .zip(vp)
                    .map(|(e, ep)| (e - ep).norm() / (z - zp).norm())
                    .collect(),
                _ => vec![0.0; values.len()],
            };

            let mut step = seg_len - s;
            for (g, d) in gaps.iter().zip(&derivs) {
                if *d > 0.0 {
                    step = step.min(g / (4.0 * d));
                }
            }
            // First step on a segment: probe conservatively.
            if prev.is_none() {
                step = step.min(seg_len / 64.0).min(min_gap.max(tol));
            }
            step = step.max(min_step);

            // Try the step, halving on ambiguous or oversized moves.
            let mut accepted = false;
            while !accepted {
                let z_next = a + dir * (s + step);
                let spec_next = spectrum_sorted(family, z_next, n_trunc)?;
                match match_set(&values, &gaps, &spec_next) {
                    MatchOutcome::Ok(next_vals) => {
                        prev = Some((z, values.clone()));
                        values = next_vals;
                        z = z_next;
                        s += step;
                        on_sample(z, &values);
                        accepted = true;
                    }
                    MatchOutcome::TooFar | MatchOutcome::Ambiguous => {
                        step *= 0.5;
                        if step < min_step {
                            return Err(Error::AmbiguousMatch { z: z_next });
                        }
                    }
                }
            }
        }
        z = b;
    }
    Ok(ContinuationOutcome::Completed { values })
}

enum MatchOutcome {
    Ok(Vec<Complex64>),
    TooFar,
    Ambiguous,
}

/// Nearest-neighbor matching with a gap/2 acceptance radius; a second
/// candidate inside the radius or a duplicate assignment is a tie.
fn match_set(values: &[Complex64], gaps: &[f64], spec: &[Complex64]) -> MatchOutcome {
    let mut out = Vec::with_capacity(values.len());
    let mut picked: Vec<usize> = Vec::with_capacity(values.len());
    for (e, g) in values.iter().zip(gaps) {
        let radius = g * 0.5;
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (idx, cand) in spec.iter().enumerate() {
            let d = (cand - e).norm();
            if d < best.0 {
                second = best.0;
                best = (d, idx);
            } else if d < second {
                second = d;
            }
        }
        if best.0 > radius {
            return MatchOutcome::TooFar;
        }
        if second <= radius {
            return MatchOutcome::Ambiguous;
        }
        if picked.contains(&best.1) {
            return MatchOutcome::Ambiguous;
        }
        picked.push(best.1);
        out.push(spec[best.1]);
    }
    MatchOutcome::Ok(out)
}

fn gaps_for(values: &[Complex64], spec: &[Complex64]) -> Vec<f64> {
    values
        .iter()
        .map(|e| {
            let mut nearest = f64::INFINITY;
            let mut second = f64::INFINITY;
            for cand in spec {
                let d = (cand - e).norm();
                if d < nearest {
                    second = nearest;
                    nearest = d;
                } else if d < second {
                    second = d;
                }
            }
            // distance from the branch value to the rest of the spectrum
            second
        })
        .collect()
}

fn spectrum_sorted(
    family: &OperatorFamily,
    z: Complex64,
    n_trunc: usize,
) -> Result<Vec<Complex64>> {
    let m = truncate(family, z, n_trunc)?;
    Ok(super::spectrum(&m, 1e-10)?.eigenvalues)
}

/// Assign starting values: the eigenvalue nearest q_k for each label, with
/// an isolation guard.
fn initial_values(
    family: &OperatorFamily,
    z0: Complex64,
    labels: &[u32],
    n_trunc: usize,
) -> Result<Vec<Complex64>> {
    let spec = spectrum_sorted(family, z0, n_trunc)?;
    let mut out = Vec::with_capacity(labels.len());
    for &k in labels {
        let target = Complex64::new(family.q(k), 0.0);
        let mut best = (f64::INFINITY, Complex64::default());
        let mut second = f64::INFINITY;
        for cand in &spec {
            let d = (cand - target).norm();
            if d < best.0 {
                second = best.0;
                best = (d, *cand);
            } else if d < second {
                second = d;
            }
        }
        if best.0 * 2.0 > second {
            return Err(Error::NearCollision { z: z0, gap: second - best.0 });
        }
        out.push(best.1);
    }
    Ok(out)
}

/// Continue branch n along the path. Adaptive steps keep the predicted
/// move below a quarter of the gap to the rest of the spectrum; when the
/// gap collapses below 10*tol the branch is returned with a
/// `NearCollision` status instead of a guessed matching.
pub fn continue_branch(
    family: &OperatorFamily,
    n: u32,
    path: &PathInC,
    tol: f64,
) -> Result<EigenBranch> {
    let mut samples = Vec::new();
    let outcome = continue_set(family, &[n], path, tol, |z, vals| {
        samples.push((z, vals[0]));
    })?;
    let status = match outcome {
        ContinuationOutcome::Completed { .. } => BranchStatus::Ok,
        ContinuationOutcome::Stopped { z_bad, gap, .. } => {
            BranchStatus::NearCollision { z_bad, gap }
        }
    };
    Ok(EigenBranch { n, path: path.clone(), samples, status })
}
