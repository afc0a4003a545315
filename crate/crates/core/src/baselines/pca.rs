//! Principal component analysis by eigendecomposition of the sample
//! covariance matrix (cyclic Jacobi rotations).

use crate::dataset::Dataset;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel<T> {
    /// `r` unit vectors, each of length `n_features`.
    components: Vec<Vec<T>>,
    /// All covariance eigenvalues, descending and non-negative.
    eigenvalues: Vec<T>,
    means: Vec<T>,
}

impl<T: Scalar> PcaModel<T> {
    /// Fits the top `r` components. Each component is signed so that its
    /// largest-magnitude entry is positive.
    pub fn fit(data: &Dataset<T>, r: usize) -> Result<Self> {
        let n = data.n_samples();
        let d = data.n_features();
        if r == 0 || r > n.min(d) {
            return Err(invalid(format!(
                "component count {r} must lie in 1..={}",
                n.min(d)
            )));
        }
        let count = T::of(n as f64);
        let mut means = vec![T::zero(); d];
        for row in data.rows() {
            for (m, &v) in means.iter_mut().zip(row) {
                *m = *m + v;
            }
        }
        means.iter_mut().for_each(|m| *m = *m / count);

        let mut cov = vec![T::zero(); d * d];
        let mut centred = vec![T::zero(); d];
        for row in data.rows() {
            for ((c, &v), &m) in centred.iter_mut().zip(row).zip(&means) {
                *c = v - m;
            }
            for i in 0..d {
                for j in i..d {
                    cov[i * d + j] = cov[i * d + j] + centred[i] * centred[j];
                }
            }
        }
        let denom = T::of(n.saturating_sub(1).max(1) as f64);
        for i in 0..d {
            for j in i..d {
                let v = cov[i * d + j] / denom;
                cov[i * d + j] = v;
                cov[j * d + i] = v;
            }
        }

        let (values, vectors) = symmetric_eigen(cov, d);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| {
            values[b]
                .partial_cmp(&values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let eigenvalues = order.iter().map(|&j| values[j].max(T::zero())).collect();
        let components = order[..r]
            .iter()
            .map(|&j| {
                let mut v: Vec<T> = (0..d).map(|i| vectors[i * d + j]).collect();
                let mut lead = 0;
                for i in 1..d {
                    if v[i].abs() > v[lead].abs() {
                        lead = i;
                    }
                }
                if v[lead] < T::zero() {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                v
            })
            .collect();
        Ok(Self {
            components,
            eigenvalues,
            means,
        })
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_features(&self) -> usize {
        self.means.len()
    }

    pub fn components(&self) -> &[Vec<T>] {
        &self.components
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn means(&self) -> &[T] {
        &self.means
    }

    /// Share of total variance carried by each retained component.
    pub fn explained_variance_ratio(&self) -> Vec<T> {
        let total: T = self.eigenvalues.iter().copied().sum();
        self.eigenvalues[..self.n_components()]
            .iter()
            .map(|&v| {
                if total > T::zero() {
                    v / total
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    /// Centres rows and projects them onto the components.
    pub fn transform(&self, data: &Dataset<T>) -> Result<Dataset<T>> {
        if data.n_features() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: data.n_features(),
            });
        }
        let r = self.n_components();
        let mut out = Vec::with_capacity(data.n_samples() * r);
        for row in data.rows() {
            for c in &self.components {
                out.push(
                    row.iter()
                        .zip(&self.means)
                        .zip(c)
                        .fold(T::zero(), |acc, ((&x, &m), &w)| acc + (x - m) * w),
                );
            }
        }
        Ok(data.with_features(out, r, (0..r).map(|j| format!("pc{j}")).collect()))
    }

    /// Maps component scores back to the original feature space.
    pub fn inverse_transform(&self, scores: &[T]) -> Result<Vec<T>> {
        if scores.len() != self.n_components() {
            return Err(Error::DimensionMismatch {
                expected: self.n_components(),
                found: scores.len(),
            });
        }
        let mut x = self.means.clone();
        for (&s, c) in scores.iter().zip(&self.components) {
            for (xi, &w) in x.iter_mut().zip(c) {
                *xi = *xi + s * w;
            }
        }
        Ok(x)
    }
}

/// Eigenvalues and row-major eigenvector matrix (column `j` pairs with
/// value `j`) of a symmetric `n x n` matrix.
pub(crate) fn symmetric_eigen<T: Scalar>(mut a: Vec<T>, n: usize) -> (Vec<T>, Vec<T>) {
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let scale: T = a.iter().map(|&x| x * x).sum::<T>().sqrt();
    let tol = T::epsilon() * scale.max(T::min_positive_value());
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<T>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}
