//! Boosting as a product of experts.
//!
//! Four trainers share one dataset and weight model:
//!
//! * AdaBoost and POEBoost.DS over decision stumps,
//! * Real AdaBoost and POEBoost.CS over single-feature logistic models.
//!
//! The POEBoost variants keep each training point's ensemble probability
//! of its label and weight points by the complement. [`bounds`] holds the
//! inequalities that make their log-likelihood monotone.

pub mod boosters;
pub mod bounds;
pub mod dataset;
pub mod error;
pub mod experts;
pub mod label;
pub mod metrics;
pub mod model_io;
pub mod poe;
pub mod serde_real;
pub mod split;
pub mod synthetic;
pub mod weights;

pub use boosters::{Algorithm, BoostConfig, RoundTrace, StopReason, TrainedModel};
pub use dataset::{load_csv, read_csv, CsvOptions, Dataset, LabelColumn};
pub use error::{Error, Result};
pub use label::Label;
pub use metrics::{EvalResult, SplitScore};
pub use split::{split_indices, train_test_split, SplitSpec};
pub use weights::WeightDistribution;
