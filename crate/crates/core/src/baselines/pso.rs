//! Binary particle swarm with a sigmoid transfer and repair to exactly `k`
//! selected features.

use std::cmp::Ordering;
use std::time::Instant;

use rand::Rng as _;

use super::{check_subset_space, SearchOutcome};
use crate::error::{invalid, Result};
use crate::seed::{rng, Rng};
use crate::subset::FeatureSubset;
use crate::wrapper::Objective;

#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub particles: usize,
    pub iterations: usize,
    /// Cognitive acceleration.
    pub c1: f64,
    /// Social acceleration.
    pub c2: f64,
    pub inertia: f64,
    pub velocity_clamp: f64,
    pub subset_size: usize,
    pub n_features: usize,
    pub seed: u64,
}

impl PsoConfig {
    /// 20 particles, 100 iterations, c1 = c2 = 2, inertia 0.9, |v| <= 4.
    pub fn new(n_features: usize, subset_size: usize) -> Self {
        Self {
            particles: 20,
            iterations: 100,
            c1: 2.0,
            c2: 2.0,
            inertia: 0.9,
            velocity_clamp: 4.0,
            subset_size,
            n_features,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles < 2 {
            return Err(invalid("PSO needs at least 2 particles"));
        }
        if self.iterations == 0 {
            return Err(invalid("PSO needs at least one iteration"));
        }
        for (name, v) in [("inertia", self.inertia), ("c1", self.c1), ("c2", self.c2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.velocity_clamp.is_nan() || self.velocity_clamp <= 0.0 {
            return Err(invalid("velocity clamp must be positive"));
        }
        Ok(())
    }
}

fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

struct Particle {
    position: Vec<bool>,
    velocity: Vec<f64>,
    fitness: f64,
    best_position: Vec<bool>,
    best_fitness: f64,
}

fn to_subset(mask: &[bool]) -> FeatureSubset {
    FeatureSubset::from_unchecked(
        mask.iter()
            .enumerate()
            .filter_map(|(i, &on)| on.then_some(i))
            .collect(),
    )
}

/// Samples a bit per dimension from `sigmoid(v)` and fixes the count to `k`:
/// surplus bits with the lowest sigmoid are dropped, missing bits are taken
/// from the unselected dimensions with the highest sigmoid. Equal sigmoids
/// are ordered by a fresh random key.
fn sample_position(velocity: &[f64], k: usize, r: &mut Rng) -> Vec<bool> {
    let n = velocity.len();
    let probs: Vec<f64> = velocity.iter().map(|&v| sigmoid(v)).collect();
    let mut mask: Vec<bool> = probs.iter().map(|&p| r.random::<f64>() < p).collect();
    let keys: Vec<f64> = (0..n).map(|_| r.random()).collect();
    let rank = |a: &usize, b: &usize| -> Ordering {
        probs[*b]
            .partial_cmp(&probs[*a])
            .unwrap_or(Ordering::Equal)
            .then(keys[*b].partial_cmp(&keys[*a]).unwrap_or(Ordering::Equal))
    };
    let mut on: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
    if on.len() > k {
        on.sort_by(rank);
        for &i in &on[k..] {
            mask[i] = false;
        }
    } else if on.len() < k {
        let mut off: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
        off.sort_by(rank);
        for &i in &off[..k - on.len()] {
            mask[i] = true;
        }
    }
    mask
}

#[allow(clippy::needless_range_loop)]
pub fn pso_run(cfg: &PsoConfig, objective: &impl Objective) -> Result<SearchOutcome> {
    cfg.validate()?;
    check_subset_space(cfg.subset_size, cfg.n_features, objective)?;
    let start = Instant::now();
    let mut r = rng(cfg.seed);
    let n = cfg.n_features;
    let mut evaluations = 0;

    let mut swarm = Vec::with_capacity(cfg.particles);
    for _ in 0..cfg.particles {
        let subset = FeatureSubset::random(cfg.subset_size, n, &mut r)?;
        let mut position = vec![false; n];
        for &i in subset.indices() {
            position[i] = true;
        }
        let fitness = objective.fitness(&to_subset(&position))?;
        evaluations += 1;
        swarm.push(Particle {
            best_position: position.clone(),
            position,
            velocity: vec![0.0; n],
            fitness,
            best_fitness: fitness,
        });
    }
    let mut global = 0;
    for (i, p) in swarm.iter().enumerate() {
        if p.best_fitness > swarm[global].best_fitness {
            global = i;
        }
    }
    let mut global_position = swarm[global].best_position.clone();
    let mut global_fitness = swarm[global].best_fitness;

    let bit = |b: bool| if b { 1.0 } else { 0.0 };
    let mut best_per_step = Vec::with_capacity(cfg.iterations);
    let mut worst_per_step = Vec::with_capacity(cfg.iterations);
    for _ in 0..cfg.iterations {
        for p in swarm.iter_mut() {
            for d in 0..n {
                let r1: f64 = r.random();
                let r2: f64 = r.random();
                let x = bit(p.position[d]);
                let v = cfg.inertia * p.velocity[d]
                    + cfg.c1 * r1 * (bit(p.best_position[d]) - x)
                    + cfg.c2 * r2 * (bit(global_position[d]) - x);
                p.velocity[d] = v.clamp(-cfg.velocity_clamp, cfg.velocity_clamp);
            }
            p.position = sample_position(&p.velocity, cfg.subset_size, &mut r);
            p.fitness = objective.fitness(&to_subset(&p.position))?;
            evaluations += 1;
            if p.fitness > p.best_fitness {
                p.best_fitness = p.fitness;
                p.best_position = p.position.clone();
            }
            if p.fitness > global_fitness {
                global_fitness = p.fitness;
                global_position = p.position.clone();
            }
        }
        best_per_step.push(global_fitness);
        worst_per_step.push(
            swarm
                .iter()
                .map(|p| p.fitness)
                .fold(f64::INFINITY, f64::min),
        );
    }
    Ok(SearchOutcome {
        best: to_subset(&global_position),
        fitness: global_fitness,
        best_per_step,
        worst_per_step,
        evaluations,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
