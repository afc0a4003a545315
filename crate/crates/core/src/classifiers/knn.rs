//! Brute-force k-nearest-neighbour classifier with fully deterministic ties.

use std::cmp::Ordering;

use crate::dataset::Dataset;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnConfig {
    pub k_neighbors: usize,
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self { k_neighbors: 1 }
    }
}

impl KnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(invalid("k_neighbors must be at least 1"));
        }
        Ok(())
    }
}

/// Majority vote among the `k` nearest training rows by Euclidean distance.
///
/// Equal distances favour the lower training index; tied votes favour the
/// lower class id. `k` larger than the training set uses every row.
pub fn knn_predict<T: Scalar>(
    train: &Dataset<T>,
    cfg: &KnnConfig,
    samples: &Dataset<T>,
) -> Result<Vec<usize>> {
    cfg.validate()?;
    if train.n_features() != samples.n_features() {
        return Err(Error::DimensionMismatch {
            expected: train.n_features(),
            found: samples.n_features(),
        });
    }
    let k = cfg.k_neighbors.min(train.n_samples());
    let mut scored: Vec<(T, usize)> = Vec::with_capacity(train.n_samples());
    let mut votes = vec![0usize; train.n_classes()];
    Ok(samples
        .rows()
        .map(|q| {
            scored.clear();
            scored.extend(train.rows().enumerate().map(|(i, r)| (sq_dist(q, r), i)));
            if k == 1 {
                let mut best = scored[0];
                for &c in &scored[1..] {
                    if c.0 < best.0 {
                        best = c;
                    }
                }
                return train.labels()[best.1];
            }
            if k < scored.len() {
                scored.select_nth_unstable_by(k - 1, by_distance_then_index);
            }
            votes.iter_mut().for_each(|v| *v = 0);
            for &(_, i) in &scored[..k] {
                votes[train.labels()[i]] += 1;
            }
            super::mlp::argmax(&votes)
        })
        .collect())
}

fn by_distance_then_index<T: Scalar>(a: &(T, usize), b: &(T, usize)) -> Ordering {
    a.0.partial_cmp(&b.0)
        .unwrap_or(Ordering::Equal)
        .then(a.1.cmp(&b.1))
}

fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}
