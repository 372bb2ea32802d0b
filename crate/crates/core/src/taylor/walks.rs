//! Closed +-1-step walks on the integer index lattice. The branch equation
//! expands scalar products of operator powers into sums over walks that
//! start and end at index n, never touch n in between, and never leave
//! the one-sided lattice {1, 2, ...}.

/// One admissible walk: the step signs and their running partial sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    /// Step signs, +1 or -1.
    pub steps: Vec<i8>,
    /// Partial sums delta_1..delta_len (offsets from the anchor index n).
    pub deltas: Vec<i32>,
}

impl Walk {
    fn from_steps(steps: Vec<i8>) -> Self {
        let mut deltas = Vec::with_capacity(steps.len());
        let mut acc = 0i32;
        for s in &steps {
            acc += *s as i32;
            deltas.push(acc);
        }
        Walk { steps, deltas }
    }

    /// Largest |delta| reached along the walk.
    pub fn max_excursion(&self) -> i32 {
        self.deltas.iter().map(|d| d.abs()).max().unwrap_or(0)
    }

    /// Crossing counts per lattice edge: returns (edge_offset, count) pairs
    /// where edge_offset e means the edge between n+e and n+e+1.
    /// Every edge of a closed walk is crossed an even number of times.
    pub fn edge_crossings(&self) -> Vec<(i32, u32)> {
        let mut counts = std::collections::BTreeMap::new();
        let mut state = 0i32;
        for s in &self.steps {
            let edge = if *s > 0 { state } else { state - 1 };
            *counts.entry(edge).or_insert(0u32) += 1;
            state += *s as i32;
        }
        counts.into_iter().collect()
    }
}

/// Enumerate every admissible walk of `len` steps anchored at index n:
/// delta_len = 0, delta_nu != 0 for nu < len, and n + delta_nu >= 1
/// throughout (the lattice is one-sided). Odd lengths yield no walks.
/// Deterministic order: depth-first with +1 before -1.
pub fn admissible_walks(len: u32, n: u32) -> Vec<Walk> {
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    let mut steps: Vec<i8> = Vec::with_capacity(len as usize);
    dfs(len as i32, 0, n as i32, &mut steps, &mut out);
    out
}

fn dfs(remaining: i32, delta: i32, n: i32, steps: &mut Vec<i8>, out: &mut Vec<Walk>) {
    if remaining == 0 {
        if delta == 0 {
            out.push(Walk::from_steps(steps.clone()));
        }
        return;
    }
    // |delta| must be reachable back to 0 in the remaining steps
    for step in [1i8, -1i8] {
        let d = delta + step as i32;
        if d.abs() > remaining - 1 {
            continue;
        }
        // stay on the lattice: state n + d >= 1
        if n + d < 1 {
            continue;
        }
        // must not return to the anchor before the final step
        if d == 0 && remaining > 1 {
            continue;
        }
        steps.push(step);
        dfs(remaining - 1, d, n, steps, out);
        steps.pop();
    }
}
