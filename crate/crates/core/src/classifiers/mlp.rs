//! One-hidden-layer perceptron trained by online backpropagation with momentum.
//!
//! Sigmoid hidden units, softmax outputs, cross-entropy loss. Each epoch visits
//! every training sample once in a freshly shuffled order and applies
//! `v <- momentum * v - learning_rate * grad; w <- w + v` after each sample.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::dataset::Dataset;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::seed::rng;

/// Training recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    /// `None` picks `ceil((n_features + n_classes) / 2)`.
    pub hidden_neurons: Option<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    /// Recorded with the configuration but not used: plain backpropagation
    /// has no established meaning for it.
    pub adjustment_factor: f64,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden_neurons: None,
            learning_rate: 0.3,
            momentum: 0.4,
            epochs: 1000,
            adjustment_factor: 0.7,
            seed: 0,
        }
    }
}

impl MlpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(invalid(format!(
                "learning rate must be finite and non-negative, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(invalid(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        if self.epochs == 0 {
            return Err(invalid("epochs must be at least 1"));
        }
        if self.hidden_neurons == Some(0) {
            return Err(invalid("hidden layer needs at least one neuron"));
        }
        Ok(())
    }

    pub fn hidden_for(&self, n_features: usize, n_classes: usize) -> usize {
        self.hidden_neurons
            .unwrap_or_else(|| (n_features + n_classes).div_ceil(2))
            .max(1)
    }
}

/// Weights and biases of both layers. Also used for gradients and velocities.
///
/// Matrices are row-major: `hidden_weights` is `n_hidden x n_inputs`,
/// `output_weights` is `n_outputs x n_hidden`.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters<T> {
    pub hidden_weights: Vec<T>,
    pub hidden_bias: Vec<T>,
    pub output_weights: Vec<T>,
    pub output_bias: Vec<T>,
}

impl<T: Scalar> Parameters<T> {
    fn zeros(n_inputs: usize, n_hidden: usize, n_outputs: usize) -> Self {
        Self {
            hidden_weights: vec![T::zero(); n_hidden * n_inputs],
            hidden_bias: vec![T::zero(); n_hidden],
            output_weights: vec![T::zero(); n_outputs * n_hidden],
            output_bias: vec![T::zero(); n_outputs],
        }
    }

    fn slices(&self) -> [&[T]; 4] {
        [
            &self.hidden_weights,
            &self.hidden_bias,
            &self.output_weights,
            &self.output_bias,
        ]
    }

    fn slices_mut(&mut self) -> [&mut [T]; 4] {
        [
            &mut self.hidden_weights,
            &mut self.hidden_bias,
            &mut self.output_weights,
            &mut self.output_bias,
        ]
    }

    /// All values in a fixed order: hidden weights, hidden bias, output
    /// weights, output bias.
    pub fn flatten(&self) -> Vec<T> {
        self.slices().concat()
    }

    pub fn len(&self) -> usize {
        self.slices().iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Inverse of [`Parameters::flatten`].
    pub fn assign_flat(&mut self, values: &[T]) {
        assert_eq!(values.len(), self.len(), "parameter count mismatch");
        let mut rest = values;
        for s in self.slices_mut() {
            let (head, tail) = rest.split_at(s.len());
            s.copy_from_slice(head);
            rest = tail;
        }
    }

    fn all_finite(&self) -> bool {
        self.slices()
            .iter()
            .all(|s| s.iter().all(|v| v.is_finite()))
    }
}

/// Trained (or hand-built) network.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel<T> {
    n_inputs: usize,
    n_hidden: usize,
    n_outputs: usize,
    params: Parameters<T>,
}

fn sigmoid<T: Scalar>(z: T) -> T {
    T::one() / (T::one() + (-z).exp())
}

impl<T: Scalar> MlpModel<T> {
    /// All-zero network.
    pub fn zeros(n_inputs: usize, n_hidden: usize, n_outputs: usize) -> Self {
        Self {
            n_inputs,
            n_hidden,
            n_outputs,
            params: Parameters::zeros(n_inputs, n_hidden, n_outputs),
        }
    }

    /// Weights uniform in `[-0.5, 0.5]` drawn from `seed`.
    pub fn random(n_inputs: usize, n_hidden: usize, n_outputs: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        Self::random_with(n_inputs, n_hidden, n_outputs, &mut r)
    }

    fn random_with(
        n_inputs: usize,
        n_hidden: usize,
        n_outputs: usize,
        r: &mut crate::seed::Rng,
    ) -> Self {
        let mut m = Self::zeros(n_inputs, n_hidden, n_outputs);
        for s in m.params.slices_mut() {
            for v in s.iter_mut() {
                *v = T::of(r.random_range(-0.5..=0.5));
            }
        }
        m
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn parameters(&self) -> &Parameters<T> {
        &self.params
    }

    pub fn parameters_mut(&mut self) -> &mut Parameters<T> {
        &mut self.params
    }

    fn forward_into(&self, x: &[T], hidden: &mut [T], probs: &mut [T]) {
        let p = &self.params;
        for (h, (w, &b)) in hidden.iter_mut().zip(
            p.hidden_weights
                .chunks_exact(self.n_inputs)
                .zip(&p.hidden_bias),
        ) {
            let z = w.iter().zip(x).fold(b, |acc, (&wi, &xi)| acc + wi * xi);
            *h = sigmoid(z);
        }
        for (o, (w, &b)) in probs.iter_mut().zip(
            p.output_weights
                .chunks_exact(self.n_hidden)
                .zip(&p.output_bias),
        ) {
            *o = w
                .iter()
                .zip(hidden.iter())
                .fold(b, |acc, (&wi, &hi)| acc + wi * hi);
        }
        softmax_in_place(probs);
    }

    /// Class probabilities for one sample.
    pub fn probabilities(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_width(x.len())?;
        let mut hidden = vec![T::zero(); self.n_hidden];
        let mut probs = vec![T::zero(); self.n_outputs];
        self.forward_into(x, &mut hidden, &mut probs);
        Ok(probs)
    }

    fn check_width(&self, found: usize) -> Result<()> {
        if found != self.n_inputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs,
                found,
            });
        }
        Ok(())
    }

    /// Argmax of the softmax output per sample, ties to the lowest class id.
    pub fn predict(&self, samples: &Dataset<T>) -> Result<Vec<usize>> {
        self.check_width(samples.n_features())?;
        let mut hidden = vec![T::zero(); self.n_hidden];
        let mut probs = vec![T::zero(); self.n_outputs];
        Ok(samples
            .rows()
            .map(|x| {
                self.forward_into(x, &mut hidden, &mut probs);
                argmax(&probs)
            })
            .collect())
    }

    /// Cross-entropy loss and its gradient with respect to every parameter.
    pub fn gradient(&self, x: &[T], label: usize) -> Result<(T, Parameters<T>)> {
        self.check_width(x.len())?;
        if label >= self.n_outputs {
            return Err(Error::DimensionMismatch {
                expected: self.n_outputs,
                found: label + 1,
            });
        }
        let mut scratch = Scratch::new(self);
        let mut grad = Parameters::zeros(self.n_inputs, self.n_hidden, self.n_outputs);
        let loss = self.backprop(x, label, &mut scratch, &mut grad);
        Ok((loss, grad))
    }

    /// Overwrites `grad` and returns the loss.
    fn backprop(&self, x: &[T], label: usize, s: &mut Scratch<T>, grad: &mut Parameters<T>) -> T {
        self.forward_into(x, &mut s.hidden, &mut s.probs);
        let loss = -s.probs[label].ln();

        // output layer: dL/dz = p - onehot
        for (c, d) in s.probs.iter().enumerate() {
            let delta = if c == label { *d - T::one() } else { *d };
            grad.output_bias[c] = delta;
            let row = &mut grad.output_weights[c * self.n_hidden..(c + 1) * self.n_hidden];
            for (g, &h) in row.iter_mut().zip(&s.hidden) {
                *g = delta * h;
            }
        }
        for j in 0..self.n_hidden {
            let back = (0..self.n_outputs).fold(T::zero(), |acc, c| {
                acc + self.params.output_weights[c * self.n_hidden + j] * grad.output_bias[c]
            });
            let h = s.hidden[j];
            s.hidden_delta[j] = back * h * (T::one() - h);
        }
        for (j, &delta) in s.hidden_delta.iter().enumerate() {
            grad.hidden_bias[j] = delta;
            let row = &mut grad.hidden_weights[j * self.n_inputs..(j + 1) * self.n_inputs];
            for (g, &xi) in row.iter_mut().zip(x) {
                *g = delta * xi;
            }
        }
        if loss.is_finite() {
            loss
        } else {
            // p_label underflowed; recompute from logits for an honest value
            self.stable_loss(x, label)
        }
    }

    fn stable_loss(&self, x: &[T], label: usize) -> T {
        let p = &self.params;
        let hidden: Vec<T> = p
            .hidden_weights
            .chunks_exact(self.n_inputs)
            .zip(&p.hidden_bias)
            .map(|(w, &b)| sigmoid(w.iter().zip(x).fold(b, |a, (&wi, &xi)| a + wi * xi)))
            .collect();
        let logits: Vec<T> = p
            .output_weights
            .chunks_exact(self.n_hidden)
            .zip(&p.output_bias)
            .map(|(w, &b)| w.iter().zip(&hidden).fold(b, |a, (&wi, &hi)| a + wi * hi))
            .collect();
        let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
        let lse = max + logits.iter().map(|&z| (z - max).exp()).sum::<T>().ln();
        lse - logits[label]
    }

    /// Trains a fresh network on `train`.
    pub fn train(train: &Dataset<T>, cfg: &MlpConfig) -> Result<Self> {
        cfg.validate()?;
        if train.n_classes() < 2 {
            return Err(Error::InvalidDataset(
                "classification needs at least two classes".into(),
            ));
        }
        let mut r = rng(cfg.seed);
        let n_hidden = cfg.hidden_for(train.n_features(), train.n_classes());
        let mut model = Self::random_with(train.n_features(), n_hidden, train.n_classes(), &mut r);
        let eta = T::of(cfg.learning_rate);
        let alpha = T::of(cfg.momentum);

        let mut scratch = Scratch::new(&model);
        let mut grad = Parameters::zeros(model.n_inputs, n_hidden, model.n_outputs);
        let mut velocity = grad.clone();
        let mut order: Vec<usize> = (0..train.n_samples()).collect();
        for epoch in 1..=cfg.epochs {
            order.shuffle(&mut r);
            let mut epoch_loss = T::zero();
            for &i in &order {
                epoch_loss = epoch_loss
                    + model.backprop(train.row(i), train.labels()[i], &mut scratch, &mut grad);
                for ((w, v), g) in model
                    .params
                    .slices_mut()
                    .into_iter()
                    .zip(velocity.slices_mut())
                    .zip(grad.slices())
                {
                    for ((w, v), &g) in w.iter_mut().zip(v.iter_mut()).zip(g) {
                        *v = alpha * *v - eta * g;
                        *w = *w + *v;
                    }
                }
            }
            if !epoch_loss.is_finite() || !model.params.all_finite() {
                return Err(Error::Diverged { epoch });
            }
        }
        Ok(model)
    }

    /// Mean cross-entropy over a dataset.
    pub fn mean_loss(&self, data: &Dataset<T>) -> Result<T> {
        self.check_width(data.n_features())?;
        let total: T = data
            .rows()
            .zip(data.labels())
            .map(|(x, &y)| self.stable_loss(x, y))
            .sum();
        Ok(total / T::of(data.n_samples() as f64))
    }
}

struct Scratch<T> {
    hidden: Vec<T>,
    hidden_delta: Vec<T>,
    probs: Vec<T>,
}

impl<T: Scalar> Scratch<T> {
    fn new(m: &MlpModel<T>) -> Self {
        Self {
            hidden: vec![T::zero(); m.n_hidden],
            hidden_delta: vec![T::zero(); m.n_hidden],
            probs: vec![T::zero(); m.n_outputs],
        }
    }
}

fn softmax_in_place<T: Scalar>(z: &mut [T]) {
    let max = z.iter().copied().fold(T::neg_infinity(), T::max);
    let mut sum = T::zero();
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum = sum + *v;
    }
    for v in z.iter_mut() {
        *v = *v / sum;
    }
}

/// First index of the maximum.
pub(crate) fn argmax<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
