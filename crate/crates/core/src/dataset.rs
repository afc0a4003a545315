//! Labelled feature matrices, CSV ingestion, stratified splitting and
//! column projection.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::rng;

/// Numeric feature matrix with dense class labels.
///
/// Rows are samples, stored row-major. Class ids are `0..n_classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    features: Vec<T>,
    n_features: usize,
    labels: Vec<usize>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl<T: Scalar> Dataset<T> {
    /// Builds a dataset from rows, checking shape, finiteness and label range.
    pub fn new(
        rows: Vec<Vec<T>>,
        labels: Vec<usize>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let n_features = feature_names.len();
        if n_features == 0 {
            return Err(Error::NoFeatureColumns);
        }
        if rows.is_empty() {
            return Err(Error::NoRows);
        }
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_features {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} values, expected {n_features}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "non-finite value at row {i}, column {j}"
                )));
            }
            features.extend(row);
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::InvalidDataset(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(Self {
            features,
            n_features,
            labels,
            feature_names,
            class_names,
        })
    }

    /// Unnamed columns `f0..` and classes `c0..`.
    pub fn from_rows(rows: Vec<Vec<T>>, labels: Vec<usize>) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        let n_classes = labels.iter().max().map_or(0, |m| m + 1);
        Self::new(
            rows,
            labels,
            (0..n_features).map(|j| format!("f{j}")).collect(),
            (0..n_classes).map(|c| format!("c{c}")).collect(),
        )
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Sample count per class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Sample indices grouped by class id, each in ascending order.
    pub fn indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.n_classes()];
        for (i, &l) in self.labels.iter().enumerate() {
            groups[l].push(i);
        }
        groups
    }

    /// Rows at `indices`, in that order. Class and feature names are kept.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Self {
            features,
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }

    /// Keeps the given columns in the given order.
    pub fn project(&self, columns: impl AsRef<[usize]>) -> Result<Self> {
        let columns = columns.as_ref();
        if columns.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.n_features) {
            return Err(Error::FeatureOutOfRange {
                index: bad,
                n_features: self.n_features,
            });
        }
        let mut features = Vec::with_capacity(self.n_samples() * columns.len());
        for row in self.rows() {
            features.extend(columns.iter().map(|&c| row[c]));
        }
        Ok(Self {
            features,
            n_features: columns.len(),
            labels: self.labels.clone(),
            feature_names: columns
                .iter()
                .map(|&c| self.feature_names[c].clone())
                .collect(),
            class_names: self.class_names.clone(),
        })
    }

    /// Replaces the feature matrix, keeping labels and class names.
    pub(crate) fn with_features(
        &self,
        features: Vec<T>,
        n_features: usize,
        feature_names: Vec<String>,
    ) -> Self {
        debug_assert_eq!(features.len(), n_features * self.n_samples());
        Self {
            features,
            n_features,
            labels: self.labels.clone(),
            feature_names,
            class_names: self.class_names.clone(),
        }
    }

    /// Parses CSV text. `label_column` names the class column; every other
    /// column must hold finite numbers.
    pub fn parse_csv(text: &str, label_column: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());

        let (header_line, header) = lines.next().ok_or(Error::EmptyCsv)?;
        let header = split_fields(header, header_line)?;
        let label_pos = header
            .iter()
            .position(|h| h == label_column)
            .ok_or_else(|| Error::MissingLabelColumn(label_column.to_owned()))?;
        if header.len() < 2 {
            return Err(Error::NoFeatureColumns);
        }
        let feature_names: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != label_pos)
            .map(|(_, h)| h.clone())
            .collect();

        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut class_names: Vec<String> = Vec::new();
        for (line_no, line) in lines {
            let fields = split_fields(line, line_no)?;
            if fields.len() != header.len() {
                return Err(Error::RaggedRow {
                    line: line_no,
                    expected: header.len(),
                    found: fields.len(),
                });
            }
            let mut row = Vec::with_capacity(feature_names.len());
            for (j, cell) in fields.iter().enumerate() {
                if j == label_pos {
                    continue;
                }
                let bad = || Error::BadCell {
                    line: line_no,
                    column: header[j].clone(),
                    value: cell.clone(),
                };
                let v: T = cell.parse().map_err(|_| bad())?;
                if !v.is_finite() {
                    return Err(bad());
                }
                row.push(v);
            }
            let class = &fields[label_pos];
            let id = match class_names.iter().position(|c| c == class) {
                Some(id) => id,
                None => {
                    class_names.push(class.clone());
                    class_names.len() - 1
                }
            };
            rows.push(row);
            labels.push(id);
        }
        Self::new(rows, labels, feature_names, class_names)
    }

    pub fn load_csv(path: impl AsRef<Path>, label_column: &str) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse_csv(&text, label_column)
    }

    /// Renders as CSV with the label column last. Values use the shortest
    /// representation that parses back to the same bits.
    pub fn to_csv_string(&self, label_column: &str) -> String {
        let mut out = self.feature_names.join(",");
        out.push(',');
        out.push_str(label_column);
        out.push('\n');
        for (row, &l) in self.rows().zip(&self.labels) {
            for v in row {
                out.push_str(&v.to_string());
                out.push(',');
            }
            out.push_str(&self.class_names[l]);
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>, label_column: &str) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(self.to_csv_string(label_column).as_bytes())?;
        Ok(())
    }
}

fn split_fields(line: &str, line_no: usize) -> Result<Vec<String>> {
    if line.contains('"') {
        return Err(Error::QuotedField { line: line_no });
    }
    Ok(line.split(',').map(|f| f.trim().to_owned()).collect())
}

/// Fraction of each class routed to the training part, plus the shuffle seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train fraction {train_fraction} must lie strictly between 0 and 1"
            )));
        }
        Ok(Self {
            train_fraction,
            seed,
        })
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 2.0 / 3.0,
            seed: 0,
        }
    }
}

/// Stratified holdout split. Each class is shuffled by seed and its first
/// `round(fraction * n_c)` members (clamped to `1..n_c`) go to training.
/// Both parts keep the original sample order.
pub fn train_test_split<T: Scalar>(
    data: &Dataset<T>,
    spec: SplitSpec,
) -> Result<(Dataset<T>, Dataset<T>)> {
    let spec = SplitSpec::new(spec.train_fraction, spec.seed)?;
    let mut r = rng(spec.seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut members) in data.indices_by_class().into_iter().enumerate() {
        let n = members.len();
        if n == 0 {
            continue;
        }
        if n < 2 {
            return Err(Error::ClassTooSmall {
                class: data.class_names[class].clone(),
                count: n,
                needed: 2,
            });
        }
        members.shuffle(&mut r);
        let n_train = ((spec.train_fraction * n as f64).round() as usize).clamp(1, n - 1);
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.select_rows(&train), data.select_rows(&test)))
}

/// Fold index for every sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    fold_of_sample: Vec<usize>,
    k: usize,
}

impl FoldAssignment {
    /// Each sample is its own fold.
    pub fn leave_one_out(n_samples: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidConfig(
                "leave-one-out needs at least 2 samples".into(),
            ));
        }
        Ok(Self {
            fold_of_sample: (0..n_samples).collect(),
            k: n_samples,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fold_of_sample(&self) -> &[usize] {
        &self.fold_of_sample
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_sample.len())
            .filter(|&i| self.fold_of_sample[i] != fold)
            .collect()
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_sample.len())
            .filter(|&i| self.fold_of_sample[i] == fold)
            .collect()
    }
}

/// Stratified k-fold assignment: each class is shuffled by seed and dealt
/// round-robin over the folds. The dealing offset carries over from class to
/// class so overall fold sizes also stay within one of each other.
pub fn stratified_kfold<T: Scalar>(
    data: &Dataset<T>,
    k: usize,
    seed: u64,
) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!(
            "fold count must be at least 2, got {k}"
        )));
    }
    let mut r = rng(seed);
    let mut fold_of_sample = vec![0; data.n_samples()];
    let mut offset = 0;
    for (class, mut members) in data.indices_by_class().into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        if members.len() < k {
            return Err(Error::ClassTooSmall {
                class: data.class_names[class].clone(),
                count: members.len(),
                needed: k,
            });
        }
        members.shuffle(&mut r);
        for (j, &i) in members.iter().enumerate() {
            fold_of_sample[i] = (offset + j) % k;
        }
        offset = (offset + members.len()) % k;
    }
    Ok(FoldAssignment { fold_of_sample, k })
}

/// Z-scores both parts with the training mean and population standard
/// deviation. Columns that are constant on the training part become zero.
pub fn standardize<T: Scalar>(
    train: &Dataset<T>,
    test: &Dataset<T>,
) -> Result<(Dataset<T>, Dataset<T>)> {
    if train.n_features != test.n_features {
        return Err(Error::DimensionMismatch {
            expected: train.n_features,
            found: test.n_features,
        });
    }
    let (means, scales) = column_moments(train);
    let apply = |d: &Dataset<T>| {
        let mut features = d.features.clone();
        for row in features.chunks_exact_mut(d.n_features) {
            for ((v, &m), &s) in row.iter_mut().zip(&means).zip(&scales) {
                *v = match s {
                    Some(s) => (*v - m) / s,
                    None => T::zero(),
                };
            }
        }
        d.with_features(features, d.n_features, d.feature_names.clone())
    };
    Ok((apply(train), apply(test)))
}

/// Per-column mean and standard deviation, `None` for degenerate columns.
fn column_moments<T: Scalar>(d: &Dataset<T>) -> (Vec<T>, Vec<Option<T>>) {
    let n = T::of(d.n_samples() as f64);
    let mut means = vec![T::zero(); d.n_features];
    for row in d.rows() {
        for (m, &v) in means.iter_mut().zip(row) {
            *m = *m + v;
        }
    }
    for m in &mut means {
        *m = *m / n;
    }
    let mut vars = vec![T::zero(); d.n_features];
    for row in d.rows() {
        for ((s, &v), &m) in vars.iter_mut().zip(row).zip(&means) {
            *s = *s + (v - m) * (v - m);
        }
    }
    let scales = vars
        .into_iter()
        .zip(&means)
        .map(|(s, &m)| {
            let sd = (s / n).sqrt();
            let floor = T::epsilon() * T::of(4.0) * m.abs().max(T::one());
            (sd > floor).then_some(sd)
        })
        .collect();
    (means, scales)
}
