//! Fixed-cardinality feature subsets, the solution encoding shared by every optimizer.

use std::fmt;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::seed::Rng;

/// Ordered list of distinct feature indices.
///
/// Positions play the role of the musicians in harmony search; the order is
/// an encoding detail and [`FeatureSubset::key`] gives the canonical set form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureSubset {
    indices: Vec<usize>,
}

impl FeatureSubset {
    pub fn new(indices: Vec<usize>, n_features: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; n_features];
        for &i in &indices {
            if i >= n_features {
                return Err(Error::FeatureOutOfRange {
                    index: i,
                    n_features,
                });
            }
            if seen[i] {
                return Err(Error::DuplicateFeature(i));
            }
            seen[i] = true;
        }
        Ok(Self { indices })
    }

    /// Every feature in natural order.
    pub fn full(n_features: usize) -> Result<Self> {
        Self::new((0..n_features).collect(), n_features)
    }

    /// Uniformly random `k`-subset of `0..n_features`, in random order.
    pub fn random(k: usize, n_features: usize, rng: &mut Rng) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptySubset);
        }
        if k > n_features {
            return Err(Error::InvalidConfig(format!(
                "subset size {k} exceeds {n_features} features"
            )));
        }
        Ok(Self {
            indices: index::sample(rng, n_features, k).into_vec(),
        })
    }

    /// Skips validation; callers guarantee distinctness and bounds.
    pub(crate) fn from_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(!indices.is_empty());
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Sorted indices: the identity of the subset as a set.
    pub fn key(&self) -> Vec<usize> {
        let mut k = self.indices.clone();
        k.sort_unstable();
        k
    }

    pub fn contains(&self, feature: usize) -> bool {
        self.indices.contains(&feature)
    }

    /// Checks distinctness and bounds against `n_features`.
    pub fn is_valid_for(&self, n_features: usize) -> bool {
        Self::new(self.indices.clone(), n_features).is_ok()
    }
}

impl AsRef<[usize]> for FeatureSubset {
    fn as_ref(&self) -> &[usize] {
        &self.indices
    }
}

impl fmt::Display for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key = self.key();
        let parts: Vec<String> = key.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
