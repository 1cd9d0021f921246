use serde::{Deserialize, Serialize};

use super::dominance::{constrained_dominates, crowding_distances, violation};

/// One evaluated design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub decision: Vec<f64>,
    pub objectives: Vec<f64>,
    pub constraints: Vec<f64>,
    pub violation: f64,
}

impl Member {
    pub fn new(decision: Vec<f64>, objectives: Vec<f64>, constraints: Vec<f64>) -> Self {
        let violation = violation(&constraints);
        Self {
            decision,
            objectives,
            constraints,
            violation,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation <= 0.0
    }

    pub fn dominates(&self, other: &Member) -> bool {
        constrained_dominates(&self.objectives, self.violation, &other.objectives, other.violation)
    }
}

/// Bounded set of mutually non-dominated members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    members: Vec<Member>,
    capacity: usize,
    reference: Option<Vec<f64>>,
}

impl ParetoArchive {
    pub fn new(capacity: usize) -> Self {
        Self {
            members: Vec::new(),
            capacity: capacity.max(1),
            reference: None,
        }
    }

    /// Archive whose two-objective pruning measures contributions against
    /// `reference`, so the hypervolume it bounds never decreases.
    pub fn with_reference(capacity: usize, reference: Vec<f64>) -> Self {
        Self {
            reference: Some(reference),
            ..Self::new(capacity)
        }
    }

    pub fn reference(&self) -> Option<&[f64]> {
        self.reference.as_deref()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// True once any feasible design has been archived; from then on the
    /// archive holds feasible members only.
    pub fn has_feasible(&self) -> bool {
        self.members.first().is_some_and(Member::is_feasible)
    }

    /// Offer a candidate. Returns whether it was kept.
    pub fn insert(&mut self, candidate: Member) -> bool {
        if candidate.objectives.iter().any(|f| f.is_nan()) || candidate.violation.is_nan() {
            return false;
        }
        for m in &self.members {
            if m.dominates(&candidate) || m.objectives == candidate.objectives && m.violation == candidate.violation {
                return false;
            }
        }
        self.members.retain(|m| !candidate.dominates(m));
        self.members.push(candidate);
        let mut kept = true;
        while self.members.len() > self.capacity {
            let worst = self.most_crowded();
            if worst + 1 == self.members.len() {
                kept = false;
            }
            self.members.remove(worst);
        }
        kept
    }

    /// Index to drop when over capacity. Two objectives: the member adding
    /// the least hypervolume, with the extremes always kept. Otherwise the
    /// member with the smallest crowding distance.
    fn most_crowded(&self) -> usize {
        let objs: Vec<&[f64]> = self.members.iter().map(|m| m.objectives.as_slice()).collect();
        let score: Vec<f64> = if objs[0].len() == 2 && self.has_feasible() {
            exclusive_areas(&objs, self.reference.as_deref())
        } else {
            crowding_distances(&objs)
        };
        let mut worst = 0;
        for (i, s) in score.iter().enumerate() {
            if s.total_cmp(&score[worst]).is_lt() {
                worst = i;
            }
        }
        worst
    }

    /// Whether some member dominates another; never true after `insert`.
    pub fn has_dominated_pair(&self) -> bool {
        self.members
            .iter()
            .enumerate()
            .any(|(i, a)| self.members.iter().enumerate().any(|(j, b)| i != j && a.dominates(b)))
    }

    pub fn objective_vectors(&self) -> Vec<Vec<f64>> {
        self.members.iter().map(|m| m.objectives.clone()).collect()
    }
}

/// Area each point of a two-objective non-dominated set adds on its own.
/// Without a reference the two extremes get infinity; with one, points
/// outside the reference box score -1 and the extremes are bounded by it.
fn exclusive_areas(objs: &[&[f64]], reference: Option<&[f64]>) -> Vec<f64> {
    let n = objs.len();
    let inside = |o: &[f64]| reference.is_none_or(|r| o[0] < r[0] && o[1] < r[1]);
    let mut area = vec![-1.0; n];
    let mut idx: Vec<usize> = (0..n).filter(|&i| inside(objs[i])).collect();
    idx.sort_by(|&a, &b| objs[a][0].total_cmp(&objs[b][0]).then(a.cmp(&b)));
    let (right, top) = reference.map_or((f64::INFINITY, f64::INFINITY), |r| (r[0], r[1]));
    for w in 0..idx.len() {
        let cur = objs[idx[w]];
        let next_f1 = if w + 1 < idx.len() { objs[idx[w + 1]][0] } else { right };
        let prev_f2 = if w > 0 { objs[idx[w - 1]][1] } else { top };
        area[idx[w]] = if next_f1.is_infinite() || prev_f2.is_infinite() {
            f64::INFINITY
        } else {
            (next_f1 - cur[0]) * (prev_f2 - cur[1])
        };
    }
    area
}
