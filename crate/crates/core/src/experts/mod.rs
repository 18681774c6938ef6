//! Weak learners: decision stumps for the discrete algorithms, univariate
//! logistic regressors for the confidence-rated ones.

mod logistic;
mod stump;

use serde::{Deserialize, Serialize};

pub use logistic::{fit_univariate_logistic, LogisticFitter, LogisticHypothesis, PROBA_CLAMP};
pub(crate) use logistic::sigmoid;
pub use stump::{fit_stump, StumpFitter, StumpHypothesis};

use crate::boosters::compute_epsilon_c;
use crate::weights::WeightDistribution;

/// The score minimized when selecting among per-feature logistic candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitCriterion {
    /// Weighted mass of points with `P(Z = y_i | x_i, h) ≤ ½`.
    WeightedZeroOne,
    /// `ε^c`, the smallest error parameter admitted by the relaxed
    /// likelihood constraint (POEBoost.CS).
    EpsilonC,
    /// `−Σ D_i P(y_i | x_i, h)` (Real AdaBoost).
    RealAdaBoostNegProb,
}

impl FitCriterion {
    /// Scores a candidate from `P(Z = y_i | x_i, h)` for every point.
    pub fn score(self, weights: &WeightDistribution, p_true: &[f64]) -> f64 {
        match self {
            FitCriterion::WeightedZeroOne => weights
                .iter()
                .zip(p_true)
                // A point at exactly ½ counts as an error for either label.
                .filter(|(_, &p)| p <= 0.5)
                .map(|(d, _)| d)
                .sum(),
            FitCriterion::EpsilonC => compute_epsilon_c(weights, p_true),
            FitCriterion::RealAdaBoostNegProb => -weights.iter().zip(p_true).map(|(d, p)| d * p).sum::<f64>(),
        }
    }
}

/// A base hypothesis of either family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Hypothesis {
    Stump(StumpHypothesis),
    Logistic(LogisticHypothesis),
}

impl Hypothesis {
    pub fn feature_index(&self) -> usize {
        match self {
            Hypothesis::Stump(h) => h.feature_index,
            Hypothesis::Logistic(h) => h.feature_index,
        }
    }
}

impl From<StumpHypothesis> for Hypothesis {
    fn from(h: StumpHypothesis) -> Self {
        Hypothesis::Stump(h)
    }
}

impl From<LogisticHypothesis> for Hypothesis {
    fn from(h: LogisticHypothesis) -> Self {
        Hypothesis::Logistic(h)
    }
}
