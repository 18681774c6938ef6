//! The product-of-experts probability model.
//!
//! An expert wraps a base hypothesis with a symmetric error parameter
//! `P_e`: the observed label differs from the hypothesis' prediction with
//! probability `P_e`, independent of the input. The ensemble probability of
//! a label is the normalized product of the expert probabilities, which is
//! computed here as a sum of logs.

use serde::{Deserialize, Serialize};

use crate::boosters::compute_alpha;
use crate::error::{Error, Result};
use crate::experts::{sigmoid, Hypothesis, LogisticHypothesis, StumpHypothesis};
use crate::label::Label;
use crate::metrics::POSTERIOR_CLAMP;
use crate::weights::WeightDistribution;

/// Default lower bound on `P_e`.
pub const DEFAULT_P_E_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    /// Discrete predictions, symmetric error (stump experts).
    Ds,
    /// Continuous (probabilistic) predictions, symmetric error (logistic experts).
    Cs,
}

/// A hypothesis with its error parameter `P_e ∈ (0, ½]`.
///
/// Discrete experts also carry `α = ½ ln((1 − P_e)/P_e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpertRepr")]
pub struct Expert {
    hypothesis: Hypothesis,
    p_e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
}

#[derive(Deserialize)]
struct ExpertRepr {
    hypothesis: Hypothesis,
    p_e: f64,
    alpha: Option<f64>,
}

impl TryFrom<ExpertRepr> for Expert {
    type Error = Error;

    fn try_from(r: ExpertRepr) -> Result<Self> {
        let e = match r.hypothesis {
            Hypothesis::Stump(h) => Expert::discrete(h, r.p_e)?,
            Hypothesis::Logistic(h) => Expert::continuous(h, r.p_e)?,
        };
        if let (Some(stored), Some(derived)) = (r.alpha, e.alpha) {
            if stored.to_bits() != derived.to_bits() {
                return Err(Error::Model(format!(
                    "alpha {stored} does not match p_e {} (expected {derived})",
                    r.p_e
                )));
            }
        }
        Ok(e)
    }
}

fn check_p_e(p_e: f64) -> Result<()> {
    if p_e > 0.0 && p_e <= 0.5 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "p_e",
            value: p_e,
            domain: "(0, 0.5]",
        })
    }
}

impl Expert {
    pub fn discrete(stump: StumpHypothesis, p_e: f64) -> Result<Self> {
        check_p_e(p_e)?;
        Ok(Expert {
            hypothesis: Hypothesis::Stump(stump),
            p_e,
            alpha: Some(compute_alpha(p_e)?),
        })
    }

    pub fn continuous(logistic: LogisticHypothesis, p_e: f64) -> Result<Self> {
        check_p_e(p_e)?;
        Ok(Expert {
            hypothesis: Hypothesis::Logistic(logistic),
            p_e,
            alpha: None,
        })
    }

    pub fn hypothesis(&self) -> &Hypothesis {
        &self.hypothesis
    }

    pub fn p_e(&self) -> f64 {
        self.p_e
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn kind(&self) -> EnsembleKind {
        match self.hypothesis {
            Hypothesis::Stump(_) => EnsembleKind::Ds,
            Hypothesis::Logistic(_) => EnsembleKind::Cs,
        }
    }

    /// `(P(+1 | x, h), P(−1 | x, h))`. The pair sums to one.
    pub fn class_probs(&self, x: &[f64]) -> (f64, f64) {
        let plus = match &self.hypothesis {
            Hypothesis::Stump(h) => expert_prob_ds(self.p_e, h.predict(x), Label::Positive),
            Hypothesis::Logistic(h) => expert_prob_cs(self.p_e, h.predict_proba(x)),
        };
        (plus, 1.0 - plus)
    }

    /// `P(label | x, h)`.
    pub fn prob_of(&self, x: &[f64], label: Label) -> f64 {
        let (plus, minus) = self.class_probs(x);
        match label {
            Label::Positive => plus,
            Label::Negative => minus,
        }
    }
}

/// Discrete expert probability: `1 − P_e` when the prediction agrees with
/// `label`, `P_e` otherwise. Equal to `e^{y h α} / (e^{−α} + e^{α})`.
#[inline]
pub fn expert_prob_ds(p_e: f64, prediction: Label, label: Label) -> f64 {
    if prediction == label {
        1.0 - p_e
    } else {
        p_e
    }
}

/// Continuous expert probability `(1 − P_e)·p + P_e·(1 − p)` where
/// `p = P(Z = label | x, h)`.
#[inline]
pub fn expert_prob_cs(p_e: f64, p_z_true: f64) -> f64 {
    (1.0 - p_e) * p_z_true + p_e * (1.0 - p_z_true)
}

#[inline]
fn clamp(p: f64) -> f64 {
    p.clamp(POSTERIOR_CLAMP, 1.0 - POSTERIOR_CLAMP)
}

/// One step of the ensemble recursion: absorbs an expert's probability of
/// the label into the previous ensemble probability of that label.
pub fn recursive_posterior_update(prev: f64, expert_true: f64) -> f64 {
    let q = clamp(prev);
    let p = clamp(expert_true);
    let num = p * q;
    clamp(num / (num + (1.0 - p) * (1.0 - q)))
}

/// Maximum absolute log-odds, corresponding to the posterior clamp.
pub fn max_log_odds() -> f64 {
    (1.0 - POSTERIOR_CLAMP).ln() - POSTERIOR_CLAMP.ln()
}

/// `ln(p / (1 − p))` after clamping.
#[inline]
pub fn log_odds(p: f64) -> f64 {
    let p = clamp(p);
    p.ln() - (1.0 - p).ln()
}

/// An ordered product of experts of a single kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoEEnsemble {
    kind: EnsembleKind,
    experts: Vec<Expert>,
}

impl PoEEnsemble {
    pub fn new(kind: EnsembleKind) -> Self {
        PoEEnsemble {
            kind,
            experts: Vec::new(),
        }
    }

    pub fn from_experts(kind: EnsembleKind, experts: Vec<Expert>) -> Result<Self> {
        let mut e = PoEEnsemble::new(kind);
        for x in experts {
            e.push(x)?;
        }
        Ok(e)
    }

    pub fn push(&mut self, expert: Expert) -> Result<()> {
        if expert.kind() != self.kind {
            return Err(Error::Precondition(format!(
                "{:?} expert added to a {:?} ensemble",
                expert.kind(),
                self.kind
            )));
        }
        self.experts.push(expert);
        Ok(())
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    pub fn len(&self) -> usize {
        self.experts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.experts.is_empty()
    }

    /// `(Σ_j ln P(+1 | x, h_j), Σ_j ln P(−1 | x, h_j))`.
    pub fn log_class_scores(&self, x: &[f64]) -> (f64, f64) {
        self.experts.iter().fold((0.0, 0.0), |(lp, lm), e| {
            let (p, m) = e.class_probs(x);
            (lp + p.ln(), lm + m.ln())
        })
    }

    /// Normalized `(P(+1 | x), P(−1 | x))` over all experts.
    pub fn posterior(&self, x: &[f64]) -> Result<(f64, f64)> {
        if self.is_empty() {
            return Err(Error::Empty("ensemble"));
        }
        let gap = self.log_gap(x);
        Ok((sigmoid(gap), sigmoid(-gap)))
    }

    /// `P(label | x)` over all experts.
    pub fn posterior_of(&self, x: &[f64], label: Label) -> Result<f64> {
        let (p, m) = self.posterior(x)?;
        Ok(match label {
            Label::Positive => p,
            Label::Negative => m,
        })
    }

    /// The larger posterior's label; an exact tie predicts `+1`.
    pub fn predict_label(&self, x: &[f64]) -> Result<Label> {
        if self.is_empty() {
            return Err(Error::Empty("ensemble"));
        }
        Ok(Label::from_sign(self.log_gap(x)))
    }

    /// `ln P(+1 | x) − ln P(−1 | x)`. For discrete experts each term is
    /// `h_j(x) ln((1 − P_e)/P_e) = 2 α_j h_j(x)`, so the gap is taken as
    /// twice the weighted vote and its sign agrees with the vote exactly.
    fn log_gap(&self, x: &[f64]) -> f64 {
        match self.kind {
            EnsembleKind::Ds => 2.0 * self.vote(x),
            EnsembleKind::Cs => self
                .experts
                .iter()
                .map(|e| {
                    let (p, m) = e.class_probs(x);
                    p.ln() - m.ln()
                })
                .sum(),
        }
    }

    fn vote(&self, x: &[f64]) -> f64 {
        self.experts
            .iter()
            .map(|e| match (&e.hypothesis, e.alpha) {
                (Hypothesis::Stump(h), Some(a)) => a * h.predict(x).value(),
                _ => unreachable!("discrete ensembles hold stump experts with alpha"),
            })
            .sum()
    }

    /// `Σ_j α_j h_j(x)` for a discrete ensemble; its sign is the
    /// predicted label.
    pub fn weighted_vote(&self, x: &[f64]) -> Result<f64> {
        if self.kind != EnsembleKind::Ds {
            return Err(Error::Precondition("weighted vote needs a discrete ensemble".into()));
        }
        Ok(self.vote(x))
    }
}

/// Per-point ensemble probability of the true label, kept as log-odds so
/// that points the ensemble is sure about still have accurate complement
/// probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    log_odds: Vec<f64>,
    round: usize,
}

impl EnsembleState {
    /// The empty ensemble: `P(y_i | x_i) = ½` for every point.
    pub fn uniform(n: usize) -> Self {
        EnsembleState {
            log_odds: vec![0.0; n],
            round: 0,
        }
    }

    pub fn from_p_true(p_true: &[f64], round: usize) -> Result<Self> {
        if let Some(p) = p_true.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(Error::Domain {
                name: "p_true",
                value: *p,
                domain: "(0, 1)",
            });
        }
        Ok(EnsembleState {
            log_odds: p_true.iter().map(|&p| log_odds(p)).collect(),
            round,
        })
    }

    pub fn len(&self) -> usize {
        self.log_odds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_odds.is_empty()
    }

    /// Number of experts absorbed.
    pub fn round(&self) -> usize {
        self.round
    }

    /// `P(y_i | x_i, h_1 … h_j)`.
    #[inline]
    pub fn p_true(&self, i: usize) -> f64 {
        sigmoid(self.log_odds[i])
    }

    /// `P(ȳ_i | x_i, h_1 … h_j)`.
    #[inline]
    pub fn p_false(&self, i: usize) -> f64 {
        sigmoid(-self.log_odds[i])
    }

    pub fn p_true_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.p_true(i)).collect()
    }

    pub fn log_odds_vec(&self) -> &[f64] {
        &self.log_odds
    }

    /// Absorbs one expert given each point's `P(y_i | x_i, h)`.
    pub fn absorb(&mut self, expert_true: &[f64]) -> Result<()> {
        let lo: Vec<f64> = expert_true.iter().map(|&p| log_odds(p)).collect();
        self.absorb_log_odds(&lo)
    }

    /// Absorbs one expert given each point's `ln(P(y_i|x_i,h) / P(ȳ_i|x_i,h))`.
    /// In log-odds the recursion is additive; the result is clamped.
    pub fn absorb_log_odds(&mut self, expert_log_odds: &[f64]) -> Result<()> {
        if expert_log_odds.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: expert_log_odds.len(),
            });
        }
        let cap = max_log_odds();
        for (z, e) in self.log_odds.iter_mut().zip(expert_log_odds) {
            *z = (*z + e.clamp(-cap, cap)).clamp(-cap, cap);
        }
        self.round += 1;
        Ok(())
    }

    /// `D_i ∝ P(ȳ_i | x_i, h_1 … h_j)`.
    pub fn complement_weights(&self) -> WeightDistribution {
        let w = (0..self.len()).map(|i| self.p_false(i)).collect();
        WeightDistribution::from_unnormalized(w).expect("complement probabilities are positive")
    }

    /// `Σ_i ln P(y_i | x_i, h_1 … h_j)`.
    pub fn loglik(&self) -> f64 {
        // ln σ(z) = −ln(1 + e^{−z})
        self.log_odds
            .iter()
            .map(|&z| {
                if z > 0.0 {
                    -(-z).exp().ln_1p()
                } else {
                    z - z.exp().ln_1p()
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use Label::{Negative as N, Positive as P};

    fn stump(t: f64) -> StumpHypothesis {
        StumpHypothesis::new(0, t, P)
    }

    #[test]
    fn ds_probability_examples() {
        assert_eq!(expert_prob_ds(0.5, P, P), 0.5);
        assert_eq!(expert_prob_ds(0.5, P, N), 0.5);
        assert_abs_diff_eq!(expert_prob_ds(0.2, P, P), 0.8, epsilon = 1e-15);
        assert_eq!(expert_prob_ds(0.2, N, P), 0.2);
        assert_eq!(expert_prob_ds(0.2, P, P) + expert_prob_ds(0.2, P, N), 1.0);
    }

    #[test]
    fn ds_probability_matches_exponential_form() {
        for p_e in [0.01, 0.2, 0.37, 0.5] {
            let a = compute_alpha(p_e).unwrap();
            for (h, y) in [(P, P), (P, N), (N, P), (N, N)] {
                let yh = y.value() * h.value();
                let expo = (yh * a).exp() / ((-a).exp() + a.exp());
                assert_abs_diff_eq!(expert_prob_ds(p_e, h, y), expo, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cs_probability_examples() {
        assert_eq!(expert_prob_cs(0.5, 0.9), 0.5);
        assert_eq!(expert_prob_cs(0.5, 0.13), 0.5);
        assert_eq!(expert_prob_cs(0.0, 0.9), 0.9);
        assert_abs_diff_eq!(expert_prob_cs(0.2, 0.9), 0.74, epsilon = 1e-15);
    }

    #[test]
    fn recursion_examples() {
        assert_abs_diff_eq!(recursive_posterior_update(0.5, 0.8), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(recursive_posterior_update(0.8, 0.5), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(recursive_posterior_update(0.8, 0.8), 0.64 / 0.68, epsilon = 1e-15);
        assert_abs_diff_eq!(recursive_posterior_update(0.8, 0.8), 0.9412, epsilon = 1e-4);
        let top = recursive_posterior_update(1.0, 1.0);
        assert!(top <= 1.0 - POSTERIOR_CLAMP);
    }

    #[test]
    fn single_expert_posterior_is_its_probability() {
        let e = Expert::continuous(LogisticHypothesis { feature_index: 0, weight: 2.0, bias: -0.5 }, 0.3).unwrap();
        let ens = PoEEnsemble::from_experts(EnsembleKind::Cs, vec![e]).unwrap();
        for x in [-2.0, 0.0, 0.7] {
            let (p, m) = ens.posterior(&[x]).unwrap();
            let (ep, em) = e.class_probs(&[x]);
            assert_abs_diff_eq!(p, ep, epsilon = 1e-12);
            assert_abs_diff_eq!(m, em, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_hundred_confident_experts_do_not_underflow() {
        let e = Expert::discrete(stump(0.0), 1e-9).unwrap();
        let ens = PoEEnsemble::from_experts(EnsembleKind::Ds, vec![e; 200]).unwrap();
        let (p, m) = ens.posterior(&[1.0]).unwrap();
        assert!(p >= 1.0 - 1e-6);
        assert!(m >= 0.0 && m.is_finite());
        assert!((p + m - 1.0).abs() <= 1e-12);
        assert_eq!(ens.predict_label(&[-1.0]).unwrap(), N);
    }

    #[test]
    fn two_cs_experts_multiply() {
        // Biases chosen so P(Z=+1) gives expert probabilities 0.74 and 0.6.
        let a = Expert::continuous(LogisticHypothesis { feature_index: 0, weight: 0.0, bias: log_odds(0.9) }, 0.2)
            .unwrap();
        let b = Expert::continuous(LogisticHypothesis { feature_index: 0, weight: 0.0, bias: log_odds(0.6) }, 1e-9)
            .unwrap();
        assert_abs_diff_eq!(a.class_probs(&[0.0]).0, 0.74, epsilon = 1e-12);
        assert_abs_diff_eq!(b.class_probs(&[0.0]).0, 0.6, epsilon = 1e-8);
        let ens = PoEEnsemble::from_experts(EnsembleKind::Cs, vec![a, b]).unwrap();
        let (p, _) = ens.posterior(&[0.0]).unwrap();
        let oracle = (0.74 * 0.6) / (0.74 * 0.6 + 0.26 * 0.4);
        assert_abs_diff_eq!(p, oracle, epsilon = 1e-8);
        assert_abs_diff_eq!(p, 0.8102, epsilon = 1e-4);
    }

    #[test]
    fn predict_and_vote_examples() {
        let plus = Expert::discrete(stump(0.0), 0.2).unwrap();
        let ens = PoEEnsemble::from_experts(EnsembleKind::Ds, vec![plus]).unwrap();
        assert_eq!(ens.predict_label(&[1.0]).unwrap(), P);
        assert_eq!(ens.predict_label(&[-1.0]).unwrap(), N);

        let half = compute_alpha_inverse(0.5);
        let one = Expert::discrete(stump(0.0), half).unwrap();
        let single = PoEEnsemble::from_experts(EnsembleKind::Ds, vec![one]).unwrap();
        assert_abs_diff_eq!(single.weighted_vote(&[1.0]).unwrap(), 0.5, epsilon = 1e-12);

        let opposite = Expert::discrete(StumpHypothesis::new(0, 0.0, N), half).unwrap();
        let cancel = PoEEnsemble::from_experts(EnsembleKind::Ds, vec![one, opposite]).unwrap();
        assert_eq!(cancel.weighted_vote(&[1.0]).unwrap(), 0.0);
        assert_eq!(cancel.predict_label(&[1.0]).unwrap(), P);

        let three = PoEEnsemble::from_experts(
            EnsembleKind::Ds,
            vec![
                Expert::discrete(stump(0.0), compute_alpha_inverse(0.3)).unwrap(),
                Expert::discrete(StumpHypothesis::new(0, 0.0, N), compute_alpha_inverse(0.2)).unwrap(),
                Expert::discrete(stump(0.0), compute_alpha_inverse(0.1)).unwrap(),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(three.weighted_vote(&[1.0]).unwrap(), 0.2, epsilon = 1e-12);

        let cs = PoEEnsemble::new(EnsembleKind::Cs);
        assert!(cs.weighted_vote(&[0.0]).is_err());
        assert!(cs.posterior(&[0.0]).is_err());
    }

    /// `P_e` for a given `α`: `e^{−α} / (e^{−α} + e^{α})`.
    fn compute_alpha_inverse(alpha: f64) -> f64 {
        (-alpha).exp() / ((-alpha).exp() + alpha.exp())
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let mut ens = PoEEnsemble::new(EnsembleKind::Cs);
        assert!(ens.push(Expert::discrete(stump(0.0), 0.1).unwrap()).is_err());
        assert!(Expert::discrete(stump(0.0), 0.6).is_err());
        assert!(Expert::continuous(LogisticHypothesis { feature_index: 0, weight: 1.0, bias: 0.0 }, 0.0).is_err());
    }

    #[test]
    fn state_tracks_recursion() {
        let mut s = EnsembleState::from_p_true(&[0.8, 0.6], 1).unwrap();
        s.absorb(&[0.8, 0.8]).unwrap();
        assert_eq!(s.round(), 2);
        assert_abs_diff_eq!(s.p_true(0), 0.941176470588, epsilon = 1e-10);
        assert_abs_diff_eq!(s.p_true(1), 0.857142857143, epsilon = 1e-10);
        assert_abs_diff_eq!(s.p_true(0) + s.p_false(0), 1.0, epsilon = 1e-15);
        let u = EnsembleState::uniform(2);
        assert_abs_diff_eq!(u.loglik(), 2.0 * 0.5f64.ln(), epsilon = 1e-15);
    }

    fn arb_expert() -> impl Strategy<Value = Expert> {
        prop_oneof![
            (-3.0f64..3.0, any::<bool>(), 1e-6f64..=0.5).prop_map(|(t, pos, p_e)| {
                Expert::discrete(StumpHypothesis::new(0, t, if pos { P } else { N }), p_e).unwrap()
            }),
            (-4.0f64..4.0, -2.0f64..2.0, 1e-6f64..=0.5).prop_map(|(w, b, p_e)| {
                Expert::continuous(LogisticHypothesis { feature_index: 0, weight: w, bias: b }, p_e).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn class_probs_complement(e in arb_expert(), x in -5.0f64..5.0) {
            let (p, m) = e.class_probs(&[x]);
            prop_assert_eq!(p + m, 1.0);
        }

        #[test]
        fn posterior_is_order_invariant(
            experts in proptest::collection::vec(arb_expert(), 1..20),
            x in -5.0f64..5.0,
            rot in 0usize..20,
        ) {
            let ds: Vec<Expert> = experts.iter().copied().filter(|e| e.kind() == EnsembleKind::Ds).collect();
            prop_assume!(!ds.is_empty());
            let mut rotated = ds.clone();
            rotated.rotate_left(rot % ds.len());
            rotated.reverse();
            let a = PoEEnsemble::from_experts(EnsembleKind::Ds, ds).unwrap();
            let b = PoEEnsemble::from_experts(EnsembleKind::Ds, rotated).unwrap();
            let (pa, _) = a.posterior(&[x]).unwrap();
            let (pb, _) = b.posterior(&[x]).unwrap();
            prop_assert!((pa - pb).abs() <= 1e-12);
        }

        #[test]
        fn identity_experts_change_nothing(
            experts in proptest::collection::vec(arb_expert(), 1..10),
            x in -5.0f64..5.0,
        ) {
            let cs: Vec<Expert> = experts.iter().copied().filter(|e| e.kind() == EnsembleKind::Cs).collect();
            prop_assume!(!cs.is_empty());
            let base = PoEEnsemble::from_experts(EnsembleKind::Cs, cs.clone()).unwrap();
            let mut more = cs.clone();
            more.push(Expert::continuous(LogisticHypothesis { feature_index: 0, weight: 0.0, bias: 0.0 }, 0.3).unwrap());
            more.push(Expert::continuous(LogisticHypothesis { feature_index: 0, weight: 1.5, bias: 0.2 }, 0.5).unwrap());
            let more = PoEEnsemble::from_experts(EnsembleKind::Cs, more).unwrap();
            let (p0, _) = base.posterior(&[x]).unwrap();
            let (p1, _) = more.posterior(&[x]).unwrap();
            prop_assert!((p0 - p1).abs() <= 1e-12);
        }

        #[test]
        fn folded_recursion_equals_product(
            experts in proptest::collection::vec(arb_expert(), 1..8),
            x in -5.0f64..5.0,
            positive in any::<bool>(),
        ) {
            let cs: Vec<Expert> = experts.iter().copied().filter(|e| e.kind() == EnsembleKind::Cs).collect();
            prop_assume!(!cs.is_empty());
            let y = if positive { P } else { N };
            let folded = cs.iter().fold(0.5, |q, e| recursive_posterior_update(q, e.prob_of(&[x], y)));
            let ens = PoEEnsemble::from_experts(EnsembleKind::Cs, cs.clone()).unwrap();
            let direct = ens.posterior_of(&[x], y).unwrap();
            prop_assert!((folded - direct).abs() <= 1e-10, "{} vs {}", folded, direct);

            let mut state = EnsembleState::uniform(1);
            for e in &cs {
                state.absorb(&[e.prob_of(&[x], y)]).unwrap();
            }
            prop_assert!((state.p_true(0) - direct).abs() <= 1e-10);
        }
    }
}
