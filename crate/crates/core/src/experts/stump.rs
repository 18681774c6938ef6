//! Decision stumps and the exhaustive weighted-error search.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::label::Label;
use crate::weights::WeightDistribution;

/// `polarity · sign(x[feature] − threshold)` with `sign(0) = +1`.
///
/// Thresholds may be `±∞`, which turns the stump into a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StumpHypothesis {
    pub feature_index: usize,
    #[serde(with = "crate::serde_real")]
    pub threshold: f64,
    pub polarity: Label,
}

impl StumpHypothesis {
    pub fn new(feature_index: usize, threshold: f64, polarity: Label) -> Self {
        StumpHypothesis {
            feature_index,
            threshold,
            polarity,
        }
    }

    #[inline]
    pub fn predict(&self, x: &[f64]) -> Label {
        if x[self.feature_index] >= self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }
}

/// Per-feature row orderings, computed once per training set so each
/// boosting round is a linear sweep.
#[derive(Debug, Clone)]
pub struct StumpFitter<'a> {
    data: &'a Dataset,
    /// For each feature, row indices sorted by ascending value.
    order: Vec<Vec<usize>>,
}

impl<'a> StumpFitter<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        let order = (0..data.n_features())
            .map(|f| {
                let mut idx: Vec<usize> = (0..data.len()).collect();
                idx.sort_by(|&a, &b| data.value(a, f).total_cmp(&data.value(b, f)));
                idx
            })
            .collect();
        StumpFitter { data, order }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// Minimum weighted 0-1 error stump over every feature, every midpoint
    /// between consecutive distinct values plus the `±∞` sentinels, and both
    /// polarities. Ties go to the lowest feature, then the lowest threshold,
    /// then polarity `+1`.
    pub fn fit(&self, weights: &WeightDistribution) -> Result<(StumpHypothesis, f64)> {
        weights.check_len(self.data.len())?;
        let d = weights.as_slice();
        let n = self.data.len();
        let mut best = (StumpHypothesis::new(0, f64::NEG_INFINITY, Label::Positive), f64::INFINITY);

        // Scratch: weight of each class strictly right of a cut, indexed by
        // the number of sorted rows on the left.
        let mut right_pos = vec![0.0; n + 1];
        let mut right_neg = vec![0.0; n + 1];

        for (feature, order) in self.order.iter().enumerate() {
            right_pos[n] = 0.0;
            right_neg[n] = 0.0;
            for k in (0..n).rev() {
                let i = order[k];
                let (p, q) = match self.data.label(i) {
                    Label::Positive => (d[i], 0.0),
                    Label::Negative => (0.0, d[i]),
                };
                right_pos[k] = right_pos[k + 1] + p;
                right_neg[k] = right_neg[k + 1] + q;
            }

            let mut left_pos = 0.0;
            let mut left_neg = 0.0;
            let consider = |threshold: f64, lp: f64, ln: f64, k: usize, best: &mut (StumpHypothesis, f64)| {
                // Polarity +1 predicts +1 on the right of the cut.
                let err_plus = lp + right_neg[k];
                let err_minus = ln + right_pos[k];
                if err_plus < best.1 {
                    *best = (StumpHypothesis::new(feature, threshold, Label::Positive), err_plus);
                }
                if err_minus < best.1 {
                    *best = (StumpHypothesis::new(feature, threshold, Label::Negative), err_minus);
                }
            };

            consider(f64::NEG_INFINITY, 0.0, 0.0, 0, &mut best);
            let mut k = 0;
            while k < n {
                let v = self.data.value(order[k], feature);
                while k < n && self.data.value(order[k], feature) == v {
                    let i = order[k];
                    match self.data.label(i) {
                        Label::Positive => left_pos += d[i],
                        Label::Negative => left_neg += d[i],
                    }
                    k += 1;
                }
                let threshold = if k < n {
                    midpoint(v, self.data.value(order[k], feature))
                } else {
                    f64::INFINITY
                };
                consider(threshold, left_pos, left_neg, k, &mut best);
            }
        }
        Ok(best)
    }
}

/// A cut `t` with `lo < t ≤ hi`, halfway when representable.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid > lo && mid <= hi {
        mid
    } else {
        hi
    }
}

/// One-shot [`StumpFitter::fit`].
pub fn fit_stump(d: &Dataset, w: &WeightDistribution) -> Result<(StumpHypothesis, f64)> {
    StumpFitter::new(d).fit(w)
}
