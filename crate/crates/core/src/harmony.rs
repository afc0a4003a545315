//! Discrete harmony search over fixed-size feature subsets.
//!
//! A harmony is an ordered list of `k` distinct feature indices; position `i`
//! is the `i`-th musician. Improvisation fills positions in order. With
//! probability HMCR a position takes a value from its own column of the
//! harmony memory (values already used by earlier positions are excluded),
//! and that value is then pitch-adjusted with probability PAR. Otherwise the
//! position takes a uniformly random unused feature. The new harmony replaces
//! the worst memory member only if it is strictly better.

use std::time::Instant;

use rand::Rng as _;

use crate::error::{invalid, Result};
use crate::seed::{rng, Rng};
use crate::subset::FeatureSubset;
use crate::wrapper::Objective;

/// How a pitch adjustment picks the neighbour of a memory value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborMode {
    /// Shift the feature index by `round(bandwidth * eps)`.
    #[default]
    IndexLine,
    /// Step `max(1, round(|bandwidth * eps|))` rows up or down the memory
    /// column the value was drawn from; falls back to `IndexLine` when that
    /// neighbour is unusable.
    MemoryColumn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsConfig {
    /// Harmony memory size.
    pub hms: usize,
    /// Harmony memory considering rate.
    pub hmcr: f64,
    /// Pitch adjusting rate.
    pub par: f64,
    pub bandwidth: f64,
    pub max_iterations: usize,
    pub subset_size: usize,
    pub n_features: usize,
    pub seed: u64,
    pub neighbor_mode: NeighborMode,
}

impl HsConfig {
    /// Defaults: HMS 20, HMCR 0.7, PAR 0.3, bandwidth 1, 10 iterations.
    pub fn new(n_features: usize, subset_size: usize) -> Self {
        Self {
            hms: 20,
            hmcr: 0.7,
            par: 0.3,
            bandwidth: 1.0,
            max_iterations: 10,
            subset_size,
            n_features,
            seed: 0,
            neighbor_mode: NeighborMode::IndexLine,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hms == 0 {
            return Err(invalid("harmony memory size must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.hmcr) {
            return Err(invalid(format!("hmcr {} outside [0, 1]", self.hmcr)));
        }
        if !(0.0..=1.0).contains(&self.par) {
            return Err(invalid(format!("par {} outside [0, 1]", self.par)));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(invalid(format!(
                "bandwidth {} must be positive",
                self.bandwidth
            )));
        }
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations must be at least 1"));
        }
        if self.subset_size == 0 {
            return Err(invalid("subset size must be at least 1"));
        }
        if self.subset_size > self.n_features {
            return Err(invalid(format!(
                "subset size {} exceeds {} features",
                self.subset_size, self.n_features
            )));
        }
        Ok(())
    }

    fn check_objective(&self, objective: &impl Objective) -> Result<()> {
        self.validate()?;
        if objective.n_features() != self.n_features {
            return Err(invalid(format!(
                "config expects {} features, objective has {}",
                self.n_features,
                objective.n_features()
            )));
        }
        Ok(())
    }
}

/// An evaluated subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Harmony {
    pub subset: FeatureSubset,
    pub fitness: f64,
}

/// The pool of `hms` evaluated harmonies.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonyMemory {
    harmonies: Vec<Harmony>,
}

impl HarmonyMemory {
    /// Wraps pre-evaluated harmonies, e.g. for hand-built scenarios.
    ///
    /// All members must share one subset size.
    pub fn from_harmonies(harmonies: Vec<Harmony>) -> Result<Self> {
        let Some(first) = harmonies.first() else {
            return Err(invalid("harmony memory cannot be empty"));
        };
        let k = first.subset.len();
        if harmonies.iter().any(|h| h.subset.len() != k) {
            return Err(invalid("harmonies differ in subset size"));
        }
        Ok(Self { harmonies })
    }

    pub fn harmonies(&self) -> &[Harmony] {
        &self.harmonies
    }

    pub fn len(&self) -> usize {
        self.harmonies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.harmonies.is_empty()
    }

    /// Values at `position` across the memory, in memory order.
    pub fn column(&self, position: usize) -> impl Iterator<Item = usize> + '_ {
        self.harmonies
            .iter()
            .map(move |h| h.subset.indices()[position])
    }

    /// First member with the lowest fitness.
    pub fn worst_index(&self) -> usize {
        let mut w = 0;
        for (i, h) in self.harmonies.iter().enumerate().skip(1) {
            if h.fitness < self.harmonies[w].fitness {
                w = i;
            }
        }
        w
    }

    /// First member with the highest fitness.
    pub fn best_index(&self) -> usize {
        let mut b = 0;
        for (i, h) in self.harmonies.iter().enumerate().skip(1) {
            if h.fitness > self.harmonies[b].fitness {
                b = i;
            }
        }
        b
    }

    pub fn worst(&self) -> &Harmony {
        &self.harmonies[self.worst_index()]
    }

    pub fn best(&self) -> &Harmony {
        &self.harmonies[self.best_index()]
    }

    /// Swaps `candidate` in for the worst member when strictly better.
    pub fn replace_worst(&mut self, candidate: Harmony) -> bool {
        let w = self.worst_index();
        if candidate.fitness > self.harmonies[w].fitness {
            self.harmonies[w] = candidate;
            true
        } else {
            false
        }
    }
}

/// Fills a memory with `hms` random subsets, each evaluated by `objective`.
pub fn initialize_memory(
    cfg: &HsConfig,
    objective: &impl Objective,
    rng: &mut Rng,
) -> Result<HarmonyMemory> {
    cfg.check_objective(objective)?;
    let mut harmonies = Vec::with_capacity(cfg.hms);
    for _ in 0..cfg.hms {
        let subset = FeatureSubset::random(cfg.subset_size, cfg.n_features, rng)?;
        let fitness = objective.fitness(&subset)?;
        harmonies.push(Harmony { subset, fitness });
    }
    Ok(HarmonyMemory { harmonies })
}

/// Moves `value` to a nearby free feature index.
///
/// The first candidate is `value + round(band * eps)` clamped to
/// `0..n_features`. If it equals `value` or is `forbidden`, indices at
/// distance 1, 2, ... from the candidate are probed, alternating sides and
/// starting on the side `eps` points to. Returns `value` when nothing is free.
pub fn pitch_adjust(
    value: usize,
    band: f64,
    eps: f64,
    forbidden: &[usize],
    n_features: usize,
) -> usize {
    if n_features == 0 {
        return value;
    }
    let last = n_features as i64 - 1;
    let shift = (band * eps).round() as i64;
    let candidate = (value as i64).saturating_add(shift).clamp(0, last);
    let free = |i: i64| {
        (0..=last).contains(&i) && i as usize != value && !forbidden.contains(&(i as usize))
    };
    if free(candidate) {
        return candidate as usize;
    }
    let first = if eps < 0.0 { -1 } else { 1 };
    for d in 1..=last.max(1) * 2 {
        for side in [first, -first] {
            let i = candidate + side * d;
            if free(i) {
                return i as usize;
            }
        }
    }
    value
}

/// Builds one new subset from the memory.
pub fn improvise(memory: &HarmonyMemory, cfg: &HsConfig, rng: &mut Rng) -> FeatureSubset {
    let k = cfg.subset_size;
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut rows: Vec<usize> = Vec::with_capacity(memory.len());
    for position in 0..k {
        let m1: f64 = rng.random();
        let mut note = None;
        if m1 < cfg.hmcr {
            rows.clear();
            rows.extend(
                memory
                    .column(position)
                    .enumerate()
                    .filter(|(_, v)| !chosen.contains(v))
                    .map(|(r, _)| r),
            );
            let drawn = if rows.is_empty() {
                // every column value is taken: draw from the rest of the memory
                memory_fallback(memory, &chosen, rng).map(|v| (v, None))
            } else {
                let r = rows[rng.random_range(0..rows.len())];
                Some((memory.harmonies[r].subset.indices()[position], Some(r)))
            };
            if let Some((mut v, row)) = drawn {
                let m2: f64 = rng.random();
                if m2 < cfg.par {
                    let eps: f64 = rng.random_range(-1.0..=1.0);
                    v = adjust(memory, cfg, position, row, v, eps, &chosen);
                }
                note = Some(v);
            }
        }
        let v = note.unwrap_or_else(|| random_unused(cfg.n_features, &chosen, rng));
        chosen.push(v);
    }
    FeatureSubset::from_unchecked(chosen)
}

fn adjust(
    memory: &HarmonyMemory,
    cfg: &HsConfig,
    position: usize,
    row: Option<usize>,
    value: usize,
    eps: f64,
    chosen: &[usize],
) -> usize {
    if let (NeighborMode::MemoryColumn, Some(row)) = (cfg.neighbor_mode, row) {
        let steps = ((cfg.bandwidth * eps).abs().round() as usize).max(1);
        let target = if eps < 0.0 {
            row.saturating_sub(steps)
        } else {
            (row + steps).min(memory.len() - 1)
        };
        let v = memory.harmonies[target].subset.indices()[position];
        if v != value && !chosen.contains(&v) {
            return v;
        }
    }
    pitch_adjust(value, cfg.bandwidth, eps, chosen, cfg.n_features)
}

/// Uniform draw among memory values not yet chosen. Every harmony holds `k`
/// distinct values and fewer than `k` are chosen, so this never fails on a
/// well-formed memory.
fn memory_fallback(memory: &HarmonyMemory, chosen: &[usize], rng: &mut Rng) -> Option<usize> {
    let mut pool: Vec<usize> = memory
        .harmonies
        .iter()
        .flat_map(|h| h.subset.indices().iter().copied())
        .filter(|v| !chosen.contains(v))
        .collect();
    pool.sort_unstable();
    pool.dedup();
    (!pool.is_empty()).then(|| pool[rng.random_range(0..pool.len())])
}

fn random_unused(n_features: usize, chosen: &[usize], rng: &mut Rng) -> usize {
    let mut nth = rng.random_range(0..n_features - chosen.len());
    for v in 0..n_features {
        if !chosen.contains(&v) {
            if nth == 0 {
                return v;
            }
            nth -= 1;
        }
    }
    unreachable!("fewer unused features than drawn rank")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Best fitness seen so far.
    pub best: f64,
    /// Worst fitness in memory after this iteration.
    pub worst: f64,
    /// Whether the improvised harmony entered the memory.
    pub replaced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunHistory {
    /// Best fitness of the freshly initialized memory.
    pub initial_best: f64,
    pub iterations: Vec<IterationRecord>,
    pub best: Harmony,
    /// Objective calls, including cache hits.
    pub evaluations: usize,
    pub elapsed_seconds: f64,
    /// Memory at termination.
    pub final_memory: HarmonyMemory,
}

impl RunHistory {
    pub fn best_per_iteration(&self) -> Vec<f64> {
        self.iterations.iter().map(|r| r.best).collect()
    }
}

/// Full search: initialize, then `max_iterations` rounds of improvise,
/// evaluate and replace-worst.
pub fn hs_run(cfg: &HsConfig, objective: &impl Objective) -> Result<(Harmony, RunHistory)> {
    cfg.check_objective(objective)?;
    let start = Instant::now();
    let mut r = rng(cfg.seed);
    let mut memory = initialize_memory(cfg, objective, &mut r)?;
    let mut evaluations = cfg.hms;
    let mut best = memory.best().clone();
    let initial_best = best.fitness;
    let mut iterations = Vec::with_capacity(cfg.max_iterations);
    for _ in 0..cfg.max_iterations {
        let subset = improvise(&memory, cfg, &mut r);
        let fitness = objective.fitness(&subset)?;
        evaluations += 1;
        let candidate = Harmony { subset, fitness };
        if candidate.fitness > best.fitness {
            best = candidate.clone();
        }
        let replaced = memory.replace_worst(candidate);
        iterations.push(IterationRecord {
            best: best.fitness,
            worst: memory.worst().fitness,
            replaced,
        });
    }
    let history = RunHistory {
        initial_best,
        iterations,
        best: best.clone(),
        evaluations,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        final_memory: memory,
    };
    Ok((best, history))
}
