//! Training loops and the per-round quantities they share.
//!
//! | algorithm     | base learner        | selection score        | data weights            |
//! |---------------|---------------------|------------------------|-------------------------|
//! | AdaBoost      | stump               | weighted 0-1 error ε   | `D·e^{−y h α}`          |
//! | POEBoost.DS   | stump               | ε                      | `∝ P(ȳ | x, ensemble)`  |
//! | POEBoost.CS   | univariate logistic | ε^c                    | `∝ P(ȳ | x, ensemble)`  |
//! | Real AdaBoost | univariate logistic | `−Σ D P(y | x, h)`     | `D·e^{−y f(x)}`         |

mod adaboost;
mod poe_cs;
mod poe_ds;
mod real_adaboost;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use adaboost::{train_adaboost, update_weights_adaboost};
pub use poe_cs::{train_poeboost_cs, update_weights_cs};
pub use poe_ds::{train_poeboost_ds, update_weights_ds};
pub use real_adaboost::{confidence, train_real_adaboost, update_weights_real};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::experts::{sigmoid, LogisticHypothesis, StumpHypothesis};
use crate::label::Label;
use crate::metrics::{accuracy, mean_log_likelihood, SplitScore};
use crate::poe::{PoEEnsemble, DEFAULT_P_E_FLOOR};
use crate::weights::WeightDistribution;

/// Scores within this distance of ½ are treated as uninformative.
pub const UNINFORMATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostConfig {
    pub rounds: usize,
    pub p_e_floor: f64,
    /// Stop at the first uninformative round (and, for the discrete
    /// algorithms, right after a zero-error stump). When false, such rounds
    /// are absorbed with a floored or capped error parameter and training
    /// runs for the full round count.
    pub stop_on_weak_failure: bool,
    pub logistic_step: f64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            rounds: 200,
            p_e_floor: DEFAULT_P_E_FLOOR,
            stop_on_weak_failure: true,
            logistic_step: 1.0,
        }
    }
}

impl BoostConfig {
    pub fn with_rounds(rounds: usize) -> Self {
        BoostConfig {
            rounds,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if !(self.p_e_floor > 0.0 && self.p_e_floor < 0.5) {
            return Err(Error::Config(format!("p_e_floor {} is not in (0, 0.5)", self.p_e_floor)));
        }
        if !(self.logistic_step > 0.0 && self.logistic_step.is_finite()) {
            return Err(Error::Config(format!("logistic_step {} must be positive", self.logistic_step)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[serde(rename = "adaboost")]
    AdaBoost,
    #[serde(rename = "real-adaboost")]
    RealAdaBoost,
    PoeboostDs,
    PoeboostCs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::AdaBoost,
        Algorithm::RealAdaBoost,
        Algorithm::PoeboostDs,
        Algorithm::PoeboostCs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AdaBoost => "adaboost",
            Algorithm::RealAdaBoost => "real-adaboost",
            Algorithm::PoeboostDs => "poeboost-ds",
            Algorithm::PoeboostCs => "poeboost-cs",
        }
    }

    /// Whether the algorithm uses decision stumps (otherwise univariate
    /// logistic regressors).
    pub fn uses_stumps(self) -> bool {
        matches!(self, Algorithm::AdaBoost | Algorithm::PoeboostDs)
    }

    pub fn train(self, d: &Dataset, cfg: &BoostConfig) -> Result<TrainedModel> {
        match self {
            Algorithm::AdaBoost => train_adaboost(d, cfg),
            Algorithm::RealAdaBoost => train_real_adaboost(d, cfg),
            Algorithm::PoeboostDs => train_poeboost_ds(d, cfg),
            Algorithm::PoeboostCs => train_poeboost_cs(d, cfg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

/// One completed round.
///
/// Column meanings per algorithm: AdaBoost and POEBoost.DS record the
/// stump's ε and α; POEBoost.CS records ε^c and the absorbed `P_e`; Real
/// AdaBoost records the weighted 0-1 error of `sign f` and the weight
/// normalizer `Σ D e^{−y f}`. `train_loglik` is `Σ_i ln P(y_i | x_i)`
/// under the model after the round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub epsilon: f64,
    #[serde(rename = "alpha_or_pe")]
    pub alpha_or_p_e: f64,
    pub train_loglik: f64,
}

/// Why a training loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum StopReason {
    RoundLimit,
    /// A hypothesis with zero weighted error was absorbed.
    PerfectFit { round: usize },
    /// The best hypothesis scored ½ or worse and training stopped before
    /// absorbing it.
    WeakLearner { round: usize, score: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedStump {
    pub stump: StumpHypothesis,
    pub alpha: f64,
}

/// AdaBoost's `Σ_j α_j h_j(x)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AdditiveEnsemble {
    pub members: Vec<WeightedStump>,
}

impl AdditiveEnsemble {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.members.iter().map(|m| m.alpha * m.stump.predict(x).value()).sum()
    }
}

/// Real AdaBoost's `Σ_j f_j(x)` with `f = ½ ln(p/(1 − p))`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConfidenceRatedEnsemble {
    pub members: Vec<LogisticHypothesis>,
}

impl ConfidenceRatedEnsemble {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.members.iter().map(|h| confidence(h, x)).sum()
    }
}

/// A trained predictor of any of the four algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "members", rename_all = "kebab-case")]
pub enum Ensemble {
    ProductOfExperts(PoEEnsemble),
    Additive(AdditiveEnsemble),
    ConfidenceRated(ConfidenceRatedEnsemble),
}

impl Ensemble {
    pub fn len(&self) -> usize {
        match self {
            Ensemble::ProductOfExperts(e) => e.len(),
            Ensemble::Additive(e) => e.members.len(),
            Ensemble::ConfidenceRated(e) => e.members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Predicted label; ties go to `+1`.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        match self {
            Ensemble::ProductOfExperts(e) => e.predict_label(x),
            Ensemble::Additive(e) => Ok(Label::from_sign(e.score(x))),
            Ensemble::ConfidenceRated(e) => Ok(Label::from_sign(e.score(x))),
        }
    }

    /// Model probability of `label`. The additive ensembles report
    /// `σ(±2 F(x))`.
    pub fn posterior_of(&self, x: &[f64], label: Label) -> Result<f64> {
        let additive = |score: f64| sigmoid(2.0 * label.value() * score);
        match self {
            Ensemble::ProductOfExperts(e) => e.posterior_of(x, label),
            Ensemble::Additive(e) => Ok(additive(e.score(x))),
            Ensemble::ConfidenceRated(e) => Ok(additive(e.score(x))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub algorithm: Algorithm,
    pub ensemble: Ensemble,
    pub traces: Vec<RoundTrace>,
    pub config: BoostConfig,
    pub stop: StopReason,
}

impl TrainedModel {
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        self.ensemble.predict(x)
    }

    pub fn predict_all(&self, d: &Dataset) -> Result<Vec<Label>> {
        d.rows().map(|x| self.predict(x)).collect()
    }

    /// Posterior of each row's true label.
    pub fn true_label_posteriors(&self, d: &Dataset) -> Result<Vec<f64>> {
        (0..d.len())
            .map(|i| self.ensemble.posterior_of(d.row(i), d.label(i)))
            .collect()
    }

    /// Accuracy and mean log-likelihood on `d`.
    pub fn evaluate(&self, d: &Dataset) -> Result<SplitScore> {
        let predicted = self.predict_all(d)?;
        Ok(SplitScore {
            accuracy: accuracy(&predicted, d.labels())?,
            loglik: mean_log_likelihood(&self.true_label_posteriors(d)?)?,
        })
    }
}

/// `Σ_{i: h(x_i) ≠ y_i} D_i`.
pub fn weighted_error(d: &Dataset, w: &WeightDistribution, h: &StumpHypothesis) -> Result<f64> {
    w.check_len(d.len())?;
    Ok((0..d.len())
        .filter(|&i| h.predict(d.row(i)) != d.label(i))
        .map(|i| w.get(i))
        .sum())
}

/// `α = ½ ln((1 − ε)/ε)` for `ε ∈ (0, ½]`.
pub fn compute_alpha(epsilon: f64) -> Result<f64> {
    if epsilon > 0.5 {
        return Err(Error::WeakLearningViolation(epsilon));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            domain: "(0, 0.5]",
        });
    }
    Ok(0.5 * ((1.0 - epsilon) / epsilon).ln())
}

/// `ε^c`: the smallest `P_e` for which the piecewise-linear relaxation of
/// the likelihood constraint stays at or below 2.
///
/// With `A = Σ_{p_i ≤ ½} D_i (1 − 2p_i)` (mass on the wrong side) and
/// `B = Σ_{p_i > ½} D_i (2p_i − 1)` (mass on the right side), this is
/// `A / (A + B)`, which equals the textbook ratio
/// `Σ_{C1} D(2p − 1) / [2 Σ_{C1} D(p − 1) − 2 Σ_{C2} D p + 1]` whenever
/// `Σ D = 1`, without depending on the total being exactly one. Returns ½
/// when `A + B < 1e-12` and lies in `[0, 1]`; values above ½ mean no
/// admissible `P_e < ½` exists.
pub fn compute_epsilon_c(w: &WeightDistribution, p_z_true: &[f64]) -> f64 {
    let (a, b) = w
        .iter()
        .zip(p_z_true)
        .fold((0.0, 0.0), |(a, b), (d, &p)| {
            if p <= 0.5 {
                (a + d * (1.0 - 2.0 * p), b)
            } else {
                (a, b + d * (2.0 * p - 1.0))
            }
        });
    let denom = a + b;
    if denom < 1e-12 {
        0.5
    } else {
        (a / denom).clamp(0.0, 1.0)
    }
}

/// Shared round bookkeeping for the training loops.
pub(crate) struct RoundLog {
    pub traces: Vec<RoundTrace>,
}

impl RoundLog {
    pub fn new() -> Self {
        RoundLog { traces: Vec::new() }
    }

    pub fn push(&mut self, epsilon: f64, alpha_or_p_e: f64, train_loglik: f64) {
        let round = self.traces.len() + 1;
        self.traces.push(RoundTrace {
            round,
            epsilon,
            alpha_or_p_e,
            train_loglik,
        });
    }
}

/// `Σ_i ln σ(2 y_i F(x_i))` for margins `y_i F(x_i)`.
pub(crate) fn additive_loglik(margins: &[f64]) -> f64 {
    margins
        .iter()
        .map(|&m| {
            let z = 2.0 * m;
            if z > 0.0 {
                -(-z).exp().ln_1p()
            } else {
                z - z.exp().ln_1p()
            }
        })
        .sum()
}
