#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subsetharmony::classifiers::{Classifier, KnnConfig};
use subsetharmony::dataset::Dataset;
use subsetharmony::wrapper::{ObjectiveConfig, Validation};

pub const PLANTED: [usize; 3] = [3, 11, 17];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn tiny8() -> Dataset<f64> {
    Dataset::load_csv(fixture("tiny8.csv"), "class").expect("bundled fixture loads")
}

/// Raw leave-one-out 1-NN on the given columns.
pub fn loo_1nn_config() -> ObjectiveConfig {
    ObjectiveConfig {
        classifier: Classifier::Knn(KnnConfig { k_neighbors: 1 }),
        validation: Validation::LeaveOneOut,
        standardize: false,
        ..ObjectiveConfig::default()
    }
}

/// Correct leave-one-out 1-NN predictions, computed directly: nearest other
/// sample by squared Euclidean distance, ties to the lower index.
pub fn loo_1nn_correct(data: &Dataset<f64>, cols: &[usize]) -> usize {
    let n = data.n_samples();
    (0..n)
        .filter(|&i| {
            let mut best = (f64::INFINITY, usize::MAX);
            for j in (0..n).filter(|&j| j != i) {
                let d: f64 = cols
                    .iter()
                    .map(|&c| (data.row(i)[c] - data.row(j)[c]).powi(2))
                    .sum();
                if d < best.0 {
                    best = (d, j);
                }
            }
            data.labels()[best.1] == data.labels()[i]
        })
        .count()
}

/// All `k`-element index combinations of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// 200 samples over 20 features uniform on (-1, 1). The class is the number
/// of positive values among the three planted features.
pub fn planted(seed: u64) -> Dataset<f64> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(200);
    let mut labels = Vec::with_capacity(200);
    for _ in 0..200 {
        let row: Vec<f64> = (0..20).map(|_| r.random_range(-1.0..1.0)).collect();
        labels.push(PLANTED.iter().filter(|&&j| row[j] > 0.0).count());
        rows.push(row);
    }
    Dataset::from_rows(rows, labels).expect("valid synthetic data")
}
