//! Experiment drivers: the HMS x iterations grid, the subset-fraction sweep
//! and the optimizer comparison, plus their report tables.

mod report;

pub use report::{
    emit_report, ComparisonReport, ComparisonRow, ConvergenceReport, FractionRow,
    FractionSweepReport, GridReport, PcaSweepReport, Report, ReportFormat, SelectionReport,
};

use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{ga_run, pso_run, GaConfig, PsoConfig};
use crate::error::{invalid, Result};
use crate::harmony::{hs_run, HsConfig};
use crate::scalar::Scalar;
use crate::seed::derive_seed;
use crate::wrapper::{FnObjective, Objective, WrapperObjective};
use crate::FeatureSubset;

/// Fractions of the feature vector swept by default, in percent.
pub const DEFAULT_FRACTIONS: [f64; 6] = [15.0, 30.0, 45.0, 60.0, 75.0, 90.0];

/// Memory sizes and iteration counts of the default grid.
pub const DEFAULT_GRID_VALUES: [usize; 5] = [10, 20, 30, 40, 50];

/// `floor(percent * n_features / 100)`, at least 1.
pub fn subset_size_for(percent: f64, n_features: usize) -> usize {
    ((percent * n_features as f64) / 100.0).floor().max(1.0) as usize
}

/// Runs harmony search once per (HMS, iterations) pair. Cells run in
/// parallel, each on a seed derived from the base seed and its labels.
pub fn sweep_grid(
    hms_values: &[usize],
    iteration_values: &[usize],
    base: &HsConfig,
    objective: &impl Objective,
) -> Result<GridReport> {
    if hms_values.is_empty() || iteration_values.is_empty() {
        return Err(invalid(
            "grid needs at least one HMS value and one iteration count",
        ));
    }
    let pairs: Vec<(usize, usize)> = iteration_values
        .iter()
        .flat_map(|&it| hms_values.iter().map(move |&h| (it, h)))
        .collect();
    let scores = pairs
        .par_iter()
        .map(|&(iterations, hms)| {
            let cfg = HsConfig {
                hms,
                max_iterations: iterations,
                seed: derive_seed(base.seed, "grid", &[hms as u64, iterations as u64]),
                ..base.clone()
            };
            hs_run(&cfg, objective).map(|(best, _)| best.fitness)
        })
        .collect::<Result<Vec<f64>>>()?;
    let cells = scores
        .chunks(hms_values.len())
        .map(<[f64]>::to_vec)
        .collect();
    GridReport::new(iteration_values.to_vec(), hms_values.to_vec(), cells)
}

/// Runs harmony search once per fraction of the feature vector.
pub fn sweep_fractions(
    fractions: &[f64],
    base: &HsConfig,
    objective: &impl Objective,
) -> Result<FractionSweepReport> {
    if fractions.is_empty() {
        return Err(invalid("no fractions to sweep"));
    }
    if let Some(bad) = fractions.iter().find(|p| !(**p > 0.0 && **p <= 100.0)) {
        return Err(invalid(format!("fraction {bad} outside (0, 100]")));
    }
    let n = objective.n_features();
    let rows = fractions
        .par_iter()
        .map(|&pct| {
            let k = subset_size_for(pct, n);
            let cfg = HsConfig {
                subset_size: k,
                n_features: n,
                seed: derive_seed(base.seed, "fraction", &[pct.to_bits()]),
                ..base.clone()
            };
            hs_run(&cfg, objective).map(|(best, _)| FractionRow {
                fraction_percent: pct,
                subset_size: k,
                accuracy_percent: best.fitness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FractionSweepReport { rows })
}

/// One optimizer entry of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerSpec {
    Hs(HsConfig),
    Ga(GaConfig),
    Pso(PsoConfig),
    /// Projection baseline, scored at every listed component count.
    Pca {
        components: Vec<usize>,
    },
}

impl OptimizerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Hs(_) => "HS",
            Self::Ga(_) => "GA",
            Self::Pso(_) => "PSO",
            Self::Pca { .. } => "PCA",
        }
    }
}

/// An objective that can take part in [`compare_optimizers`].
pub trait ComparisonTarget: Objective {
    /// Drops memoized scores so each optimizer pays for its own evaluations.
    fn reset_cache(&self) {}

    /// Largest component count [`Self::pca_fitness`] accepts; 0 when the
    /// projection baseline is unavailable.
    fn pca_limit(&self) -> usize {
        0
    }

    /// Accuracy with the top `components` principal components of all features.
    fn pca_fitness(&self, components: usize) -> Result<f64> {
        let _ = components;
        Err(invalid("PCA baseline needs a dataset-backed objective"))
    }
}

impl<T: Scalar> ComparisonTarget for WrapperObjective<'_, T> {
    fn reset_cache(&self) {
        self.cache().clear();
    }

    fn pca_limit(&self) -> usize {
        self.max_pca_components()
    }

    fn pca_fitness(&self, components: usize) -> Result<f64> {
        Ok(self.evaluate_pca(components)?.accuracy_percent)
    }
}

impl<F> ComparisonTarget for FnObjective<F> where F: Fn(&FeatureSubset) -> f64 + Sync {}

/// Runs every optimizer in turn and records its best subset size, accuracy
/// and wall-clock time. Optimizers run sequentially so timings do not
/// compete for cores.
pub fn compare_optimizers(
    specs: &[OptimizerSpec],
    objective: &impl ComparisonTarget,
) -> Result<ComparisonReport> {
    if specs.is_empty() {
        return Err(invalid("no optimizers to compare"));
    }
    for spec in specs {
        match spec {
            OptimizerSpec::Hs(cfg) => cfg.validate()?,
            OptimizerSpec::Ga(cfg) => cfg.validate()?,
            OptimizerSpec::Pso(cfg) => cfg.validate()?,
            OptimizerSpec::Pca { components } => check_components(components, objective)?,
        }
    }
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        objective.reset_cache();
        let start = Instant::now();
        let (subset_size, accuracy_percent) = match spec {
            OptimizerSpec::Hs(cfg) => {
                let (best, _) = hs_run(cfg, objective)?;
                (best.subset.len(), best.fitness)
            }
            OptimizerSpec::Ga(cfg) => {
                let out = ga_run(cfg, objective)?;
                (out.best.len(), out.fitness)
            }
            OptimizerSpec::Pso(cfg) => {
                let out = pso_run(cfg, objective)?;
                (out.best.len(), out.fitness)
            }
            OptimizerSpec::Pca { components } => best_pca(components, objective)?,
        };
        rows.push(ComparisonRow {
            optimizer: spec.name().to_string(),
            subset_size,
            accuracy_percent,
            execution_seconds: Some(start.elapsed().as_secs_f64()),
        });
    }
    objective.reset_cache();
    Ok(ComparisonReport { rows })
}

fn check_components(components: &[usize], objective: &impl ComparisonTarget) -> Result<()> {
    if components.is_empty() {
        return Err(invalid("no component counts given"));
    }
    let limit = objective.pca_limit();
    if let Some(bad) = components.iter().find(|&&r| r == 0 || r > limit) {
        return Err(invalid(format!(
            "component count {bad} must lie in 1..={limit}"
        )));
    }
    Ok(())
}

/// Accuracy at each component count.
pub fn sweep_pca(
    components: &[usize],
    objective: &impl ComparisonTarget,
) -> Result<PcaSweepReport> {
    check_components(components, objective)?;
    let rows = components
        .iter()
        .map(|&r| objective.pca_fitness(r).map(|a| (r, a)))
        .collect::<Result<_>>()?;
    Ok(PcaSweepReport { rows })
}

fn best_pca(components: &[usize], objective: &impl ComparisonTarget) -> Result<(usize, f64)> {
    sweep_pca(components, objective)?
        .best()
        .ok_or_else(|| invalid("no component counts given"))
}
