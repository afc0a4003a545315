//! Wrapper objective: cross-validated accuracy of a classifier trained on a
//! projected feature subset, with a shared memo of evaluated subsets.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;
use std::time::Instant;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::baselines::PcaModel;
use crate::classifiers::Classifier;
use crate::dataset::{standardize, stratified_kfold, Dataset, FoldAssignment};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::seed::derive_seed;
use crate::subset::FeatureSubset;

/// Percentage of correctly classified samples.
pub fn accuracy(correct: usize, total: usize) -> Result<f64> {
    if total == 0 {
        return Err(invalid("accuracy of an empty sample set"));
    }
    if correct > total {
        return Err(invalid(format!("{correct} correct out of {total}")));
    }
    Ok(100.0 * correct as f64 / total as f64)
}

/// Wilson score interval for a binomial proportion.
pub fn confidence_interval(p_hat: f64, n: usize, level: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(invalid(format!("proportion {p_hat} outside [0, 1]")));
    }
    if n == 0 {
        return Err(invalid("confidence interval needs at least one sample"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(invalid(format!("confidence level {level} outside (0, 1)")));
    }
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - level) / 2.0);
    let n = n as f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = (centre - half).clamp(0.0, p_hat);
    let hi = (centre + half).clamp(p_hat, 1.0);
    Ok((lo, hi))
}

/// Outcome of cross-validating one feature subset.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub accuracy_percent: f64,
    pub per_fold_accuracy: Vec<f64>,
    pub correct_count: usize,
    pub total_count: usize,
    pub elapsed_seconds: f64,
}

impl EvaluationResult {
    /// Wilson interval on the pooled accuracy, as fractions.
    pub fn confidence_interval(&self, level: f64) -> Result<(f64, f64)> {
        confidence_interval(
            self.correct_count as f64 / self.total_count as f64,
            self.total_count,
            level,
        )
    }
}

/// How fold results combine into one score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Total correct over total samples.
    #[default]
    Pooled,
    /// Unweighted mean of per-fold accuracies.
    FoldMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    StratifiedKFold { folds: usize },
    LeaveOneOut,
}

impl Default for Validation {
    fn default() -> Self {
        Validation::StratifiedKFold { folds: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveConfig {
    pub classifier: Classifier,
    pub validation: Validation,
    pub fold_seed: u64,
    /// Z-score each training fold and apply its statistics to the held-out fold.
    pub standardize: bool,
    pub averaging: Averaging,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        Self {
            classifier: Classifier::default(),
            validation: Validation::default(),
            fold_seed: 0,
            standardize: true,
            averaging: Averaging::Pooled,
        }
    }
}

impl ObjectiveConfig {
    pub fn validate(&self) -> Result<()> {
        if let Validation::StratifiedKFold { folds } = self.validation {
            if folds < 2 {
                return Err(invalid(format!(
                    "fold count must be at least 2, got {folds}"
                )));
            }
        }
        self.classifier.validate()
    }

    pub fn folds_for<T: Scalar>(&self, data: &Dataset<T>) -> Result<FoldAssignment> {
        match self.validation {
            Validation::StratifiedKFold { folds } => stratified_kfold(data, folds, self.fold_seed),
            Validation::LeaveOneOut => FoldAssignment::leave_one_out(data.n_samples()),
        }
    }
}

/// Memo of evaluated subsets keyed by their sorted indices.
#[derive(Debug, Default)]
pub struct SubsetCache {
    entries: RwLock<HashMap<Vec<usize>, EvaluationResult>>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl SubsetCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, subset: &FeatureSubset) -> Option<EvaluationResult> {
        let found = self
            .entries
            .read()
            .expect("cache lock poisoned")
            .get(&subset.key())
            .cloned();
        let counter = if found.is_some() {
            &self.hits
        } else {
            &self.misses
        };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(&self, subset: &FeatureSubset, result: EvaluationResult) {
        self.entries
            .write()
            .expect("cache lock poisoned")
            .insert(subset.key(), result);
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn clear(&self) {
        self.entries.write().expect("cache lock poisoned").clear();
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }
}

/// One-shot evaluation: builds folds from `cfg`, consults and fills `cache`.
pub fn evaluate_subset<T: Scalar>(
    data: &Dataset<T>,
    subset: &FeatureSubset,
    cfg: &ObjectiveConfig,
    cache: &SubsetCache,
) -> Result<EvaluationResult> {
    if let Some(hit) = cache.get(subset) {
        return Ok(hit);
    }
    cfg.validate()?;
    let folds = cfg.folds_for(data)?;
    let result = cross_validate(data, subset.indices(), cfg, &folds, |tr, te| Ok((tr, te)))?;
    cache.insert(subset, result.clone());
    Ok(result)
}

/// Runs the fold loop on `data` projected to `columns`. `transform` may
/// remap each (train, test) pair after standardization.
fn cross_validate<T, F>(
    data: &Dataset<T>,
    columns: &[usize],
    cfg: &ObjectiveConfig,
    folds: &FoldAssignment,
    transform: F,
) -> Result<EvaluationResult>
where
    T: Scalar,
    F: Fn(Dataset<T>, Dataset<T>) -> Result<(Dataset<T>, Dataset<T>)>,
{
    let start = Instant::now();
    let projected = data.project(columns)?;
    let mut per_fold = Vec::with_capacity(folds.k());
    let mut correct = 0;
    let mut total = 0;
    let base_seed = match &cfg.classifier {
        Classifier::Mlp(m) => m.seed,
        Classifier::Knn(_) => 0,
    };
    for fold in 0..folds.k() {
        let train = projected.select_rows(&folds.train_indices(fold));
        let test = projected.select_rows(&folds.test_indices(fold));
        let (train, test) = if cfg.standardize {
            standardize(&train, &test)?
        } else {
            (train, test)
        };
        let (train, test) = transform(train, test)?;
        let predicted = cfg.classifier.fit_predict(
            &train,
            &test,
            derive_seed(base_seed, "fold", &[fold as u64]),
        )?;
        let hits = predicted
            .iter()
            .zip(test.labels())
            .filter(|(p, l)| p == l)
            .count();
        per_fold.push(accuracy(hits, test.n_samples())?);
        correct += hits;
        total += test.n_samples();
    }
    let accuracy_percent = match cfg.averaging {
        Averaging::Pooled => accuracy(correct, total)?,
        Averaging::FoldMean => per_fold.iter().sum::<f64>() / per_fold.len() as f64,
    };
    Ok(EvaluationResult {
        accuracy_percent,
        per_fold_accuracy: per_fold,
        correct_count: correct,
        total_count: total,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Anything that scores feature subsets; higher is better.
pub trait Objective: Sync {
    fn n_features(&self) -> usize;

    fn fitness(&self, subset: &FeatureSubset) -> Result<f64>;
}

/// Adapts a closure into an [`Objective`].
pub struct FnObjective<F> {
    n_features: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&FeatureSubset) -> f64 + Sync,
{
    pub fn new(n_features: usize, f: F) -> Self {
        Self { n_features, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&FeatureSubset) -> f64 + Sync,
{
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn fitness(&self, subset: &FeatureSubset) -> Result<f64> {
        Ok((self.f)(subset))
    }
}

/// Cross-validated classifier accuracy over a fixed dataset and fold plan.
///
/// Folds are drawn once at construction so every candidate subset is scored
/// on the same partitions.
pub struct WrapperObjective<'a, T> {
    data: &'a Dataset<T>,
    cfg: ObjectiveConfig,
    folds: FoldAssignment,
    cache: SubsetCache,
}

impl<'a, T: Scalar> WrapperObjective<'a, T> {
    pub fn new(data: &'a Dataset<T>, cfg: ObjectiveConfig) -> Result<Self> {
        cfg.validate()?;
        let folds = cfg.folds_for(data)?;
        Ok(Self {
            data,
            cfg,
            folds,
            cache: SubsetCache::new(),
        })
    }

    pub fn data(&self) -> &Dataset<T> {
        self.data
    }

    pub fn config(&self) -> &ObjectiveConfig {
        &self.cfg
    }

    pub fn folds(&self) -> &FoldAssignment {
        &self.folds
    }

    pub fn cache(&self) -> &SubsetCache {
        &self.cache
    }

    pub fn evaluate(&self, subset: &FeatureSubset) -> Result<EvaluationResult> {
        if let Some(hit) = self.cache.get(subset) {
            return Ok(hit);
        }
        let result = self.evaluate_uncached(subset)?;
        self.cache.insert(subset, result.clone());
        Ok(result)
    }

    pub fn evaluate_uncached(&self, subset: &FeatureSubset) -> Result<EvaluationResult> {
        cross_validate(
            self.data,
            subset.indices(),
            &self.cfg,
            &self.folds,
            |tr, te| Ok((tr, te)),
        )
    }

    /// Largest component count every training fold can support.
    pub fn max_pca_components(&self) -> usize {
        let smallest_train = (0..self.folds.k())
            .map(|f| self.folds.train_indices(f).len())
            .min()
            .unwrap_or(0);
        self.data.n_features().min(smallest_train)
    }

    /// Scores the classifier on the top `components` principal components
    /// of all features, fitting the projection on each training fold.
    pub fn evaluate_pca(&self, components: usize) -> Result<EvaluationResult> {
        let all: Vec<usize> = (0..self.data.n_features()).collect();
        cross_validate(self.data, &all, &self.cfg, &self.folds, |tr, te| {
            let model = PcaModel::fit(&tr, components)?;
            Ok((model.transform(&tr)?, model.transform(&te)?))
        })
    }
}

impl<T: Scalar> Objective for WrapperObjective<'_, T> {
    fn n_features(&self) -> usize {
        self.data.n_features()
    }

    fn fitness(&self, subset: &FeatureSubset) -> Result<f64> {
        Ok(self.evaluate(subset)?.accuracy_percent)
    }
}
