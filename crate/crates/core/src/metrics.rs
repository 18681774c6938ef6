use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

/// Clamp applied to posteriors before taking logs.
pub const POSTERIOR_CLAMP: f64 = 1e-12;

pub fn accuracy(predicted: &[Label], actual: &[Label]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            actual: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::Empty("accuracy inputs"));
    }
    let hits = predicted.iter().zip(actual).filter(|(p, a)| p == a).count();
    Ok(hits as f64 / actual.len() as f64)
}

/// Mean natural-log posterior of the true labels, `(1/n) Σ ln P(y_i | x_i)`,
/// with each posterior clamped to `[δ, 1 − δ]`.
pub fn mean_log_likelihood(posteriors: &[f64]) -> Result<f64> {
    if posteriors.is_empty() {
        return Err(Error::Empty("posteriors"));
    }
    let total: f64 = posteriors
        .iter()
        .map(|p| clamp_posterior(*p).ln())
        .sum();
    Ok(total / posteriors.len() as f64)
}

#[inline]
pub fn clamp_posterior(p: f64) -> f64 {
    if p.is_nan() {
        return 0.5;
    }
    p.clamp(POSTERIOR_CLAMP, 1.0 - POSTERIOR_CLAMP)
}

/// Test-set accuracy and mean log-likelihood for one split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitScore {
    pub accuracy: f64,
    pub loglik: f64,
}

/// Aggregate over repeats. Standard deviations are population (divide by
/// the number of splits).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub loglik_mean: f64,
    pub loglik_std: f64,
    pub per_split: Vec<SplitScore>,
}

impl EvalResult {
    pub fn from_splits(per_split: Vec<SplitScore>) -> Result<Self> {
        if per_split.is_empty() {
            return Err(Error::Empty("split scores"));
        }
        let (accuracy_mean, accuracy_std) = mean_std(per_split.iter().map(|s| s.accuracy));
        let (loglik_mean, loglik_std) = mean_std(per_split.iter().map(|s| s.loglik));
        Ok(EvalResult {
            accuracy_mean,
            accuracy_std,
            loglik_mean,
            loglik_std,
            per_split,
        })
    }
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
