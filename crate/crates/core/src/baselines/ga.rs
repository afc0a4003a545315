//! Generational GA on sorted fixed-size index lists.
//!
//! Size-2 tournament selection, single-point crossover with duplicate repair,
//! per-gene mutation to an unused index, and one elite carried over.

use std::time::Instant;

use rand::Rng as _;

use super::{check_rate, check_subset_space, SearchOutcome};
use crate::error::{invalid, Result};
use crate::seed::{rng, Rng};
use crate::subset::FeatureSubset;
use crate::wrapper::Objective;

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub subset_size: usize,
    pub n_features: usize,
    pub seed: u64,
}

impl GaConfig {
    /// 20 chromosomes, 100 generations, crossover 1.0, mutation 0.1.
    pub fn new(n_features: usize, subset_size: usize) -> Self {
        Self {
            population: 20,
            generations: 100,
            crossover_rate: 1.0,
            mutation_rate: 0.1,
            subset_size,
            n_features,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(invalid("GA population must be at least 2"));
        }
        if self.generations == 0 {
            return Err(invalid("GA needs at least one generation"));
        }
        check_rate("crossover rate", self.crossover_rate)?;
        check_rate("mutation rate", self.mutation_rate)
    }
}

#[derive(Clone)]
struct Chromosome {
    genes: Vec<usize>,
    fitness: f64,
}

fn tournament<'a>(pop: &'a [Chromosome], r: &mut Rng) -> &'a Chromosome {
    let a = &pop[r.random_range(0..pop.len())];
    let b = &pop[r.random_range(0..pop.len())];
    if b.fitness > a.fitness {
        b
    } else {
        a
    }
}

fn random_unused(genes: &[usize], n_features: usize, r: &mut Rng) -> usize {
    loop {
        let v = r.random_range(0..n_features);
        if !genes.contains(&v) {
            return v;
        }
    }
}

/// Replaces repeated genes with random unused indices.
fn repair(genes: &mut [usize], n_features: usize, r: &mut Rng) {
    for i in 1..genes.len() {
        if genes[..i].contains(&genes[i]) {
            genes[i] = random_unused(genes, n_features, r);
        }
    }
}

fn mutate(genes: &mut [usize], rate: f64, n_features: usize, r: &mut Rng) {
    if genes.len() == n_features {
        return;
    }
    for i in 0..genes.len() {
        if r.random::<f64>() < rate {
            genes[i] = random_unused(genes, n_features, r);
        }
    }
}

pub fn ga_run(cfg: &GaConfig, objective: &impl Objective) -> Result<SearchOutcome> {
    cfg.validate()?;
    check_subset_space(cfg.subset_size, cfg.n_features, objective)?;
    let start = Instant::now();
    let mut r = rng(cfg.seed);
    let k = cfg.subset_size;
    let mut evaluations = 0;
    let mut evaluate = |genes: Vec<usize>| -> Result<Chromosome> {
        evaluations += 1;
        let fitness = objective.fitness(&FeatureSubset::from_unchecked(genes.clone()))?;
        Ok(Chromosome { genes, fitness })
    };

    let mut population = Vec::with_capacity(cfg.population);
    for _ in 0..cfg.population {
        let genes = FeatureSubset::random(k, cfg.n_features, &mut r)?.key();
        population.push(evaluate(genes)?);
    }
    let mut best = fittest(&population).clone();
    let mut best_per_step = Vec::with_capacity(cfg.generations);
    let mut worst_per_step = Vec::with_capacity(cfg.generations);

    for _ in 0..cfg.generations {
        let mut next = vec![fittest(&population).clone()];
        while next.len() < cfg.population {
            let a = tournament(&population, &mut r).genes.clone();
            let b = tournament(&population, &mut r).genes.clone();
            let (mut c1, mut c2) = if k > 1 && r.random::<f64>() < cfg.crossover_rate {
                let point = r.random_range(1..k);
                let c1 = [&a[..point], &b[point..]].concat();
                let c2 = [&b[..point], &a[point..]].concat();
                (c1, c2)
            } else {
                (a, b)
            };
            for child in [&mut c1, &mut c2] {
                repair(child, cfg.n_features, &mut r);
                mutate(child, cfg.mutation_rate, cfg.n_features, &mut r);
                child.sort_unstable();
            }
            for child in [c1, c2] {
                if next.len() < cfg.population {
                    next.push(evaluate(child)?);
                }
            }
        }
        population = next;
        let gen_best = fittest(&population);
        if gen_best.fitness > best.fitness {
            best = gen_best.clone();
        }
        best_per_step.push(best.fitness);
        worst_per_step.push(
            population
                .iter()
                .map(|c| c.fitness)
                .fold(f64::INFINITY, f64::min),
        );
    }
    Ok(SearchOutcome {
        best: FeatureSubset::from_unchecked(best.genes),
        fitness: best.fitness,
        best_per_step,
        worst_per_step,
        evaluations,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

fn fittest(pop: &[Chromosome]) -> &Chromosome {
    let mut b = &pop[0];
    for c in &pop[1..] {
        if c.fitness > b.fitness {
            b = c;
        }
    }
    b
}
