//! Wrapper feature selection with discrete harmony search.
//!
//! A feature subset is scored by the cross-validated accuracy of a
//! classifier trained on those columns only. Harmony search, a genetic
//! algorithm and a binary particle swarm search the space of fixed-size
//! subsets against that score; PCA provides a projection baseline. The
//! [`harness`] module runs the parameter grid, fraction sweep and optimizer
//! comparison and writes their reports.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the element type for the common cases.

pub mod baselines;
pub mod classifiers;
pub mod cli;
pub mod dataset;
mod error;
pub mod harmony;
pub mod harness;
mod scalar;
pub mod seed;
mod subset;
pub mod wrapper;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use subset::FeatureSubset;

pub type Dataset64 = dataset::Dataset<f64>;
pub type Dataset32 = dataset::Dataset<f32>;
pub type MlpModel64 = classifiers::MlpModel<f64>;
pub type MlpModel32 = classifiers::MlpModel<f32>;
pub type PcaModel64 = baselines::PcaModel<f64>;
pub type PcaModel32 = baselines::PcaModel<f32>;
pub type WrapperObjective64<'a> = wrapper::WrapperObjective<'a, f64>;
pub type WrapperObjective32<'a> = wrapper::WrapperObjective<'a, f32>;
