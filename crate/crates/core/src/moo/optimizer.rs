use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::archive::{Member, ParetoArchive};
use super::dominance::{crowding_distances, non_dominated_ranks};
use crate::error::{Error, Result};

/// Objective and constraint values of one design. Constraints are met
/// when <= 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub constraints: Vec<f64>,
}

impl Evaluation {
    pub fn new(objectives: Vec<f64>, constraints: Vec<f64>) -> Self {
        Self { objectives, constraints }
    }
}

/// Box-bounded design problem with an optional integrality mask.
pub struct ProblemSpec<F> {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub integer: Vec<bool>,
    pub n_objectives: usize,
    pub n_constraints: usize,
    pub evaluate: F,
}

impl<F> ProblemSpec<F>
where
    F: Fn(&[f64]) -> Evaluation + Sync,
{
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, n_objectives: usize, n_constraints: usize, evaluate: F) -> Result<Self> {
        let integer = vec![false; lower.len()];
        let spec = Self {
            lower,
            upper,
            integer,
            n_objectives,
            n_constraints,
            evaluate,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_integer(mut self, mask: Vec<bool>) -> Result<Self> {
        self.integer = mask;
        self.validate()?;
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.is_empty() || self.lower.len() != self.upper.len() || self.integer.len() != self.lower.len() {
            return Err(Error::Optimizer("bounds and integrality mask must have equal, non-zero length".into()));
        }
        if self.lower.iter().zip(&self.upper).any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite()) {
            return Err(Error::Optimizer("every lower bound must be finite and <= its upper bound".into()));
        }
        if self.n_objectives == 0 {
            return Err(Error::Optimizer("at least one objective is required".into()));
        }
        Ok(())
    }

    fn repair(&self, x: &mut [f64]) {
        for j in 0..x.len() {
            if self.integer[j] {
                x[j] = x[j].round();
            }
            x[j] = x[j].clamp(self.lower[j], self.upper[j]);
        }
    }

    fn member(&self, x: Vec<f64>) -> Result<Member> {
        let e = (self.evaluate)(&x);
        if e.objectives.len() != self.n_objectives || e.constraints.len() != self.n_constraints {
            return Err(Error::Optimizer(format!(
                "evaluation returned {} objectives and {} constraints, expected {} and {}",
                e.objectives.len(),
                e.constraints.len(),
                self.n_objectives,
                self.n_constraints
            )));
        }
        Ok(Member::new(x, e.objectives, e.constraints))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub population: usize,
    /// Total number of objective evaluations.
    pub budget: usize,
    pub archive_capacity: usize,
    pub crossover_probability: f64,
    pub crossover_eta: f64,
    pub mutation_eta: f64,
    /// Generations between local pattern-search refinements.
    pub polish_interval: usize,
    /// Evaluations spent per refinement.
    pub polish_evaluations: usize,
    /// Evaluate each generation on the rayon pool.
    pub parallel: bool,
    /// Fixed hypervolume reference used for two-objective archive pruning.
    pub hypervolume_reference: Option<Vec<f64>>,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            population: 64,
            budget: 20_000,
            archive_capacity: 100,
            crossover_probability: 0.9,
            crossover_eta: 15.0,
            mutation_eta: 20.0,
            polish_interval: 5,
            polish_evaluations: 40,
            parallel: true,
            hypervolume_reference: None,
        }
    }
}

/// State handed to the observer after every generation.
#[derive(Debug, Clone, Copy)]
pub struct GenerationReport<'a> {
    pub generation: usize,
    pub evaluations: usize,
    pub archive: &'a ParetoArchive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub archive: ParetoArchive,
    pub evaluations: usize,
    pub generations: usize,
    /// False when no feasible design was found; the archive then holds the
    /// least-violating designs.
    pub feasible: bool,
}

pub fn optimize<F>(spec: &ProblemSpec<F>, settings: &OptimizerSettings, seed: u64) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> Evaluation + Sync,
{
    optimize_with_observer(spec, settings, seed, |_| {})
}

/// Archive-based evolutionary search with simulated binary crossover,
/// polynomial mutation, rank-and-crowding survival and periodic pattern
/// search around archive members.
pub fn optimize_with_observer<F, O>(
    spec: &ProblemSpec<F>,
    settings: &OptimizerSettings,
    seed: u64,
    mut observer: O,
) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> Evaluation + Sync,
    O: FnMut(&GenerationReport),
{
    spec.validate()?;
    let pop_size = settings.population.max(2);
    if settings.budget < pop_size {
        return Err(Error::Optimizer(format!(
            "budget {} is smaller than the population {}",
            settings.budget, pop_size
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut archive = match &settings.hypervolume_reference {
        Some(r) => ParetoArchive::with_reference(settings.archive_capacity, r.clone()),
        None => ParetoArchive::new(settings.archive_capacity),
    };
    let n = spec.n_vars();

    let initial: Vec<Vec<f64>> = (0..pop_size)
        .map(|_| {
            let mut x: Vec<f64> = (0..n)
                .map(|j| {
                    if spec.lower[j] == spec.upper[j] {
                        spec.lower[j]
                    } else {
                        rng.random_range(spec.lower[j]..=spec.upper[j])
                    }
                })
                .collect();
            spec.repair(&mut x);
            x
        })
        .collect();
    let mut population = evaluate_batch(spec, initial, settings.parallel)?;
    let mut evaluations = population.len();
    for m in &population {
        archive.insert(m.clone());
    }
    let mut generation = 0;
    observer(&GenerationReport {
        generation,
        evaluations,
        archive: &archive,
    });

    while evaluations < settings.budget {
        generation += 1;
        let (rank, crowd) = rank_and_crowding(&population);
        let batch = (settings.budget - evaluations).min(pop_size);
        let mut children = Vec::with_capacity(batch);
        while children.len() < batch {
            let a = tournament(&mut rng, &rank, &crowd);
            let b = tournament(&mut rng, &rank, &crowd);
            let (mut c1, mut c2) = sbx(
                &mut rng,
                &population[a].decision,
                &population[b].decision,
                spec,
                settings,
            );
            mutate(&mut rng, &mut c1, spec, settings.mutation_eta);
            mutate(&mut rng, &mut c2, spec, settings.mutation_eta);
            spec.repair(&mut c1);
            spec.repair(&mut c2);
            children.push(c1);
            if children.len() < batch {
                children.push(c2);
            }
        }
        let offspring = evaluate_batch(spec, children, settings.parallel)?;
        evaluations += offspring.len();
        for m in &offspring {
            archive.insert(m.clone());
        }
        population.extend(offspring);
        population = survivors(population, pop_size);

        if settings.polish_interval > 0 && generation % settings.polish_interval == 0 && !archive.is_empty() {
            let remaining = settings.budget - evaluations;
            let pick = rng.random_range(0..archive.len());
            let start = archive.members()[pick].clone();
            evaluations += polish(spec, settings, start, remaining.min(settings.polish_evaluations), &mut archive)?;
        }
        observer(&GenerationReport {
            generation,
            evaluations,
            archive: &archive,
        });
    }

    let feasible = archive.has_feasible();
    if !feasible {
        log::warn!("no feasible design found in {evaluations} evaluations");
    }
    Ok(OptimizationResult {
        archive,
        evaluations,
        generations: generation,
        feasible,
    })
}

fn evaluate_batch<F>(spec: &ProblemSpec<F>, xs: Vec<Vec<f64>>, parallel: bool) -> Result<Vec<Member>>
where
    F: Fn(&[f64]) -> Evaluation + Sync,
{
    if parallel {
        xs.into_par_iter().map(|x| spec.member(x)).collect()
    } else {
        xs.into_iter().map(|x| spec.member(x)).collect()
    }
}

fn rank_and_crowding(pop: &[Member]) -> (Vec<usize>, Vec<f64>) {
    let objs: Vec<&[f64]> = pop.iter().map(|m| m.objectives.as_slice()).collect();
    let viol: Vec<f64> = pop.iter().map(|m| m.violation).collect();
    let rank = non_dominated_ranks(&objs, &viol);
    let mut crowd = vec![0.0; pop.len()];
    let max_rank = rank.iter().copied().max().unwrap_or(0);
    for r in 0..=max_rank {
        let idx: Vec<usize> = (0..pop.len()).filter(|&i| rank[i] == r).collect();
        let front: Vec<&[f64]> = idx.iter().map(|&i| objs[i]).collect();
        for (k, d) in crowding_distances(&front).into_iter().enumerate() {
            crowd[idx[k]] = d;
        }
    }
    (rank, crowd)
}

fn tournament(rng: &mut ChaCha8Rng, rank: &[usize], crowd: &[f64]) -> usize {
    let a = rng.random_range(0..rank.len());
    let b = rng.random_range(0..rank.len());
    if rank[a] != rank[b] {
        if rank[a] < rank[b] {
            a
        } else {
            b
        }
    } else if crowd[b] > crowd[a] {
        b
    } else {
        a
    }
}

fn survivors(pop: Vec<Member>, size: usize) -> Vec<Member> {
    let (rank, crowd) = rank_and_crowding(&pop);
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| rank[a].cmp(&rank[b]).then(crowd[b].total_cmp(&crowd[a])).then(a.cmp(&b)));
    order.truncate(size);
    order.sort_unstable();
    let mut keep = vec![false; pop.len()];
    for i in order {
        keep[i] = true;
    }
    pop.into_iter().zip(keep).filter(|(_, k)| *k).map(|(m, _)| m).collect()
}

/// Bounded simulated binary crossover.
fn sbx<F>(
    rng: &mut ChaCha8Rng,
    p1: &[f64],
    p2: &[f64],
    spec: &ProblemSpec<F>,
    settings: &OptimizerSettings,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() > settings.crossover_probability {
        return (c1, c2);
    }
    let eta = settings.crossover_eta;
    for j in 0..p1.len() {
        let (lo, hi) = (spec.lower[j], spec.upper[j]);
        if rng.random::<f64>() > 0.5 || (p1[j] - p2[j]).abs() < 1e-14 * (hi - lo).max(1.0) {
            continue;
        }
        let (y1, y2) = if p1[j] < p2[j] { (p1[j], p2[j]) } else { (p2[j], p1[j]) };
        let u: f64 = rng.random();
        let child = |bound_gap: f64| {
            let beta = 1.0 + 2.0 * bound_gap / (y2 - y1);
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let bq1 = child(y1 - lo);
        let bq2 = child(hi - y2);
        let mut a = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
        let mut b = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
        a = a.clamp(lo, hi);
        b = b.clamp(lo, hi);
        if rng.random::<bool>() {
            std::mem::swap(&mut a, &mut b);
        }
        c1[j] = a;
        c2[j] = b;
    }
    (c1, c2)
}

/// Bounded polynomial mutation, one variable in `n` on average.
fn mutate<F>(rng: &mut ChaCha8Rng, x: &mut [f64], spec: &ProblemSpec<F>, eta: f64) {
    let n = x.len();
    for j in 0..n {
        let (lo, hi) = (spec.lower[j], spec.upper[j]);
        if hi <= lo || rng.random::<f64>() > 1.0 / n as f64 {
            continue;
        }
        let span = hi - lo;
        let d1 = (x[j] - lo) / span;
        let d2 = (hi - x[j]) / span;
        let u: f64 = rng.random();
        let p = 1.0 / (eta + 1.0);
        let dq = if u < 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            v.powf(p) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - v.powf(p)
        };
        x[j] = (x[j] + dq * span).clamp(lo, hi);
    }
}

/// Compass search from `start`. Every probe is offered to the archive; the
/// centre moves whenever a probe dominates it. Returns evaluations used.
fn polish<F>(
    spec: &ProblemSpec<F>,
    settings: &OptimizerSettings,
    start: Member,
    budget: usize,
    archive: &mut ParetoArchive,
) -> Result<usize>
where
    F: Fn(&[f64]) -> Evaluation + Sync,
{
    let n = spec.n_vars();
    let mut centre = start;
    let mut step: Vec<f64> = (0..n).map(|j| 0.05 * (spec.upper[j] - spec.lower[j])).collect();
    let mut used = 0;
    while used < budget {
        let mut probes = Vec::with_capacity(2 * n);
        for j in 0..n {
            let s = if spec.integer[j] { step[j].round().max(1.0) } else { step[j] };
            if s <= 0.0 {
                continue;
            }
            for sign in [1.0, -1.0] {
                let mut x = centre.decision.clone();
                x[j] += sign * s;
                spec.repair(&mut x);
                if x != centre.decision {
                    probes.push(x);
                }
            }
        }
        probes.truncate(budget - used);
        if probes.is_empty() {
            break;
        }
        used += probes.len();
        let evaluated = evaluate_batch(spec, probes, settings.parallel)?;
        let mut moved = false;
        for m in evaluated {
            archive.insert(m.clone());
            if !moved && m.dominates(&centre) {
                centre = m;
                moved = true;
            }
        }
        if !moved {
            for s in &mut step {
                *s *= 0.5;
            }
        }
    }
    Ok(used)
}
