//! Classifiers used as wrapper objectives.

mod knn;
mod mlp;

pub use knn::{knn_predict, KnnConfig};
pub use mlp::{MlpConfig, MlpModel, Parameters};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::scalar::Scalar;

/// Which learner scores a feature subset.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Mlp(MlpConfig),
    Knn(KnnConfig),
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier::Mlp(MlpConfig::default())
    }
}

impl Classifier {
    pub fn validate(&self) -> Result<()> {
        match self {
            Classifier::Mlp(c) => c.validate(),
            Classifier::Knn(c) => c.validate(),
        }
    }

    /// Fits on `train` and predicts `test`. `seed` replaces the MLP seed so
    /// each fold trains from its own stream.
    pub fn fit_predict<T: Scalar>(
        &self,
        train: &Dataset<T>,
        test: &Dataset<T>,
        seed: u64,
    ) -> Result<Vec<usize>> {
        match self {
            Classifier::Mlp(cfg) => {
                let cfg = MlpConfig {
                    seed,
                    ..cfg.clone()
                };
                MlpModel::train(train, &cfg)?.predict(test)
            }
            Classifier::Knn(cfg) => knn_predict(train, cfg, test),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classifier::Mlp(_) => "mlp",
            Classifier::Knn(_) => "knn",
        }
    }
}
