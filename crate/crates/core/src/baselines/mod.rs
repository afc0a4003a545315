//! Comparison methods: genetic algorithm and binary particle swarm over the
//! same fixed-size subset space as harmony search, and principal component
//! analysis as a projection baseline.

mod ga;
mod pca;
mod pso;

pub use ga::{ga_run, GaConfig};
pub use pca::PcaModel;
pub use pso::{pso_run, PsoConfig};

use crate::error::{invalid, Result};
use crate::subset::FeatureSubset;
use crate::wrapper::Objective;

/// Result of a population-based search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: FeatureSubset,
    pub fitness: f64,
    /// Best-so-far fitness after each generation or iteration.
    pub best_per_step: Vec<f64>,
    /// Worst fitness in the current population after each step.
    pub worst_per_step: Vec<f64>,
    /// Objective calls, including cache hits.
    pub evaluations: usize,
    pub elapsed_seconds: f64,
}

fn check_subset_space(
    subset_size: usize,
    n_features: usize,
    objective: &impl Objective,
) -> Result<()> {
    if subset_size == 0 || subset_size > n_features {
        return Err(invalid(format!(
            "subset size {subset_size} must lie in 1..={n_features}"
        )));
    }
    if objective.n_features() != n_features {
        return Err(invalid(format!(
            "config expects {n_features} features, objective has {}",
            objective.n_features()
        )));
    }
    Ok(())
}

fn check_rate(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(invalid(format!("{name} {v} outside [0, 1]")));
    }
    Ok(())
}
