use crate::error::{Error, Result};

/// Pareto dominance for minimisation: `a` is no worse everywhere and
/// strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "objective arity mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Total constraint violation; a constraint is met when its value is <= 0.
pub fn violation(constraints: &[f64]) -> f64 {
    constraints.iter().map(|c| c.max(0.0)).sum()
}

/// Feasibility-first dominance between evaluated points: a feasible point
/// beats any infeasible one, infeasible points are ordered by violation and
/// feasible points by Pareto dominance.
pub fn constrained_dominates(a_obj: &[f64], a_violation: f64, b_obj: &[f64], b_violation: f64) -> bool {
    match (a_violation > 0.0, b_violation > 0.0) {
        (false, true) => true,
        (true, false) => false,
        (true, true) => a_violation < b_violation,
        (false, false) => dominates_unchecked(a_obj, b_obj),
    }
}

/// Front index of every point under constrained dominance (0 = first front).
pub fn non_dominated_ranks(objectives: &[&[f64]], violations: &[f64]) -> Vec<usize> {
    let n = objectives.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominating: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if constrained_dominates(objectives[i], violations[i], objectives[j], violations[j]) {
                dominating[i].push(j);
                dominated_by[j] += 1;
            } else if constrained_dominates(objectives[j], violations[j], objectives[i], violations[i]) {
                dominating[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut front: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut level = 0;
    while !front.is_empty() {
        let mut next = Vec::new();
        for &i in &front {
            rank[i] = level;
            for &j in &dominating[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        front = next;
        level += 1;
    }
    rank
}

/// Crowding distance of each point within one set; boundary points get
/// infinity.
pub fn crowding_distances(objectives: &[&[f64]]) -> Vec<f64> {
    let n = objectives.len();
    let mut d = vec![0.0; n];
    if n == 0 {
        return d;
    }
    let m = objectives[0].len();
    let mut idx: Vec<usize> = (0..n).collect();
    for k in 0..m {
        idx.sort_by(|&a, &b| objectives[a][k].total_cmp(&objectives[b][k]).then(a.cmp(&b)));
        let lo = objectives[idx[0]][k];
        let hi = objectives[idx[n - 1]][k];
        d[idx[0]] = f64::INFINITY;
        d[idx[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n.saturating_sub(1) {
            d[idx[w]] += (objectives[idx[w + 1]][k] - objectives[idx[w - 1]][k]) / span;
        }
    }
    d
}
