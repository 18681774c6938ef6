//! Univariate logistic base learners trained by one gradient step.

use serde::{Deserialize, Serialize};

use super::FitCriterion;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::weights::WeightDistribution;

/// Probability clamp applied to logistic outputs.
pub const PROBA_CLAMP: f64 = 1e-9;

/// `P(Z = +1 | x) = σ(weight · x[feature] + bias)`, in raw feature units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticHypothesis {
    pub feature_index: usize,
    pub weight: f64,
    pub bias: f64,
}

impl LogisticHypothesis {
    #[inline]
    pub fn logit(&self, x: &[f64]) -> f64 {
        self.weight * x[self.feature_index] + self.bias
    }

    /// `P(Z = +1 | x)`, clamped to `[δ_p, 1 − δ_p]`.
    #[inline]
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        clamp_proba(sigmoid(self.logit(x)))
    }

    /// `P(Z = label | x)`; the two labels sum to one.
    #[inline]
    pub fn proba_of(&self, x: &[f64], label: Label) -> f64 {
        let p = self.predict_proba(x);
        match label {
            Label::Positive => p,
            Label::Negative => 1.0 - p,
        }
    }

    /// Hard prediction, `+1` when `P(Z = +1) ≥ ½`.
    pub fn predict(&self, x: &[f64]) -> Label {
        if self.predict_proba(x) >= 0.5 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[inline]
fn clamp_proba(p: f64) -> f64 {
    if p.is_nan() {
        return 0.5;
    }
    p.clamp(PROBA_CLAMP, 1.0 - PROBA_CLAMP)
}

/// Per-feature location and scale used to standardize before the gradient
/// step. Constant features get scale 1.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Standardizer {
    mean: f64,
    scale: f64,
}

/// Weighted negative log-likelihood `−Σ D_i ln σ(y_i (w z_i + b))` and its
/// gradient in `(w, b)` for standardized inputs `z`.
fn weighted_nll_and_gradient(z: &[f64], labels: &[Label], d: &[f64], w: f64, b: f64) -> (f64, f64, f64) {
    let mut nll = 0.0;
    let mut gw = 0.0;
    let mut gb = 0.0;
    for ((&zi, &yi), &di) in z.iter().zip(labels).zip(d) {
        let y = yi.value();
        let m = y * (w * zi + b);
        // ln σ(m) = −softplus(−m)
        nll += di * softplus(-m);
        let r = sigmoid(-m);
        gw -= di * y * zi * r;
        gb -= di * y * r;
    }
    (nll, gw, gb)
}

#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Fits one univariate logistic candidate per feature and selects by a
/// [`FitCriterion`].
#[derive(Debug, Clone)]
pub struct LogisticFitter<'a> {
    data: &'a Dataset,
    standardizers: Vec<Standardizer>,
    /// Standardized columns, feature-major.
    columns: Vec<Vec<f64>>,
}

impl<'a> LogisticFitter<'a> {
    /// Standardization statistics come from `data`, which should be the
    /// training split.
    pub fn new(data: &'a Dataset) -> Self {
        let n = data.len() as f64;
        let mut standardizers = Vec::with_capacity(data.n_features());
        let mut columns = Vec::with_capacity(data.n_features());
        for f in 0..data.n_features() {
            let mean = data.column(f).sum::<f64>() / n;
            let var = data.column(f).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let sd = var.sqrt();
            let scale = if sd > 0.0 && sd.is_finite() { sd } else { 1.0 };
            standardizers.push(Standardizer { mean, scale });
            columns.push(data.column(f).map(|v| (v - mean) / scale).collect());
        }
        LogisticFitter {
            data,
            standardizers,
            columns,
        }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// One gradient step of size `step` from `(0, 0)` on feature `f`,
    /// returned in raw feature units.
    pub fn step_feature(&self, f: usize, weights: &WeightDistribution, step: f64) -> Result<LogisticHypothesis> {
        let (_, gw, gb) =
            weighted_nll_and_gradient(&self.columns[f], self.data.labels(), weights.as_slice(), 0.0, 0.0);
        if !gw.is_finite() || !gb.is_finite() {
            return Err(Error::Internal(format!("non-finite gradient on feature {f}")));
        }
        let w = -step * gw;
        let b = -step * gb;
        let Standardizer { mean, scale } = self.standardizers[f];
        Ok(LogisticHypothesis {
            feature_index: f,
            weight: w / scale,
            bias: b - w * mean / scale,
        })
    }

    /// Weighted NLL of feature `f` at standardized parameters `(w, b)`.
    pub fn weighted_nll(&self, f: usize, weights: &WeightDistribution, w: f64, b: f64) -> f64 {
        weighted_nll_and_gradient(&self.columns[f], self.data.labels(), weights.as_slice(), w, b).0
    }

    /// `P(Z = y_i | x_i, h)` for every training row.
    pub fn true_class_probs(&self, h: &LogisticHypothesis) -> Vec<f64> {
        (0..self.data.len())
            .map(|i| h.proba_of(self.data.row(i), self.data.label(i)))
            .collect()
    }

    /// Best candidate under `criterion`; ties go to the lowest feature.
    pub fn fit(
        &self,
        weights: &WeightDistribution,
        criterion: FitCriterion,
        step: f64,
    ) -> Result<(LogisticHypothesis, f64)> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Domain {
                name: "step",
                value: step,
                domain: "(0, ∞)",
            });
        }
        weights.check_len(self.data.len())?;
        let mut best: Option<(LogisticHypothesis, f64)> = None;
        for f in 0..self.data.n_features() {
            let h = self.step_feature(f, weights, step)?;
            let p_true = self.true_class_probs(&h);
            let score = criterion.score(weights, &p_true);
            if best.as_ref().is_none_or(|(_, s)| score < *s) {
                best = Some((h, score));
            }
        }
        best.ok_or(Error::Empty("features"))
    }
}

/// One-shot [`LogisticFitter::fit`].
pub fn fit_univariate_logistic(
    d: &Dataset,
    w: &WeightDistribution,
    criterion: FitCriterion,
    step: f64,
) -> Result<(LogisticHypothesis, f64)> {
    LogisticFitter::new(d).fit(w, criterion, step)
}
