use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ D_i = 1`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Per-point weights `D_i`: nonnegative and summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDistribution(Vec<f64>);

impl WeightDistribution {
    /// `D_i = 1/N`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("weight distribution"));
        }
        Ok(WeightDistribution(vec![1.0 / n as f64; n]))
    }

    /// Normalizes nonnegative finite weights with a positive total.
    pub fn from_unnormalized(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("weight distribution"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or non-finite")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(WeightDistribution(weights))
    }

    /// Accepts weights that already form a simplex within [`SIMPLEX_TOLERANCE`].
    pub fn from_simplex(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("weight distribution"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or non-finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightDistribution(weights))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: self.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_is_simplex() {
        let w = WeightDistribution::uniform(7).unwrap();
        assert!((w.total() - 1.0).abs() < SIMPLEX_TOLERANCE);
        assert!(WeightDistribution::uniform(0).is_err());
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(WeightDistribution::from_unnormalized(vec![0.0, 0.0]).is_err());
        assert!(WeightDistribution::from_unnormalized(vec![1.0, -0.1]).is_err());
        assert!(WeightDistribution::from_unnormalized(vec![f64::NAN]).is_err());
        assert!(WeightDistribution::from_simplex(vec![0.5, 0.6]).is_err());
        assert!(WeightDistribution::from_simplex(vec![0.5, 0.5]).is_ok());
    }

    proptest! {
        #[test]
        fn normalize_yields_simplex(raw in proptest::collection::vec(0.0f64..1e6, 1..200)) {
            prop_assume!(raw.iter().sum::<f64>() > 0.0);
            let w = WeightDistribution::from_unnormalized(raw).unwrap();
            prop_assert!((w.total() - 1.0).abs() < SIMPLEX_TOLERANCE);
            prop_assert!(w.iter().all(|x| x >= 0.0));
        }
    }
}
