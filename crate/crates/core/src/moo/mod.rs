//! Constrained multi-objective optimisation over box-bounded mixed
//! real/integer design spaces.

mod archive;
mod dominance;
mod hypervolume;
mod optimizer;

pub use archive::{Member, ParetoArchive};
pub use dominance::{constrained_dominates, crowding_distances, dominates, non_dominated_ranks, violation};
pub use hypervolume::{hypervolume, hypervolume_contributions};
pub use optimizer::{
    optimize, optimize_with_observer, Evaluation, GenerationReport, OptimizationResult, OptimizerSettings, ProblemSpec,
};
