use super::{additive_loglik, Algorithm, BoostConfig, ConfidenceRatedEnsemble, Ensemble, RoundLog, StopReason, TrainedModel};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::experts::{FitCriterion, LogisticFitter, LogisticHypothesis};
use crate::label::Label;
use crate::weights::WeightDistribution;

/// Confidence-rated output `f(x) = ½ ln(p / (1 − p))`, `p = P(Z = +1 | x)`.
/// Bounded because `p` is clamped.
pub fn confidence(h: &LogisticHypothesis, x: &[f64]) -> f64 {
    let p = h.predict_proba(x);
    0.5 * (p.ln() - (1.0 - p).ln())
}

/// `D_i ← D_i · e^{−y_i f_i}`, renormalized.
pub fn update_weights_real(w: &WeightDistribution, f: &[f64], labels: &[Label]) -> Result<WeightDistribution> {
    w.check_len(f.len())?;
    if labels.len() != f.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            actual: labels.len(),
        });
    }
    let next = w
        .iter()
        .zip(f)
        .zip(labels)
        .map(|((d, fi), y)| d * (-y.value() * fi).exp())
        .collect();
    WeightDistribution::from_unnormalized(next)
}

/// Real AdaBoost with univariate logistic base learners selected by
/// `−Σ D_i P(y_i | x_i, h)`.
pub fn train_real_adaboost(d: &Dataset, cfg: &BoostConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    let fitter = LogisticFitter::new(d);
    let mut w = WeightDistribution::uniform(d.len())?;
    let mut margins = vec![0.0; d.len()];
    let mut members = Vec::new();
    let mut log = RoundLog::new();

    for _ in 0..cfg.rounds {
        let (h, _) = fitter.fit(&w, FitCriterion::RealAdaBoostNegProb, cfg.logistic_step)?;
        let f: Vec<f64> = d.rows().map(|x| confidence(&h, x)).collect();
        let error: f64 = (0..d.len())
            .filter(|&i| Label::from_sign(f[i]) != d.label(i))
            .map(|i| w.get(i))
            .sum();
        let normalizer: f64 = (0..d.len())
            .map(|i| w.get(i) * (-d.label(i).value() * f[i]).exp())
            .sum();
        w = update_weights_real(&w, &f, d.labels())?;
        for (i, m) in margins.iter_mut().enumerate() {
            *m += d.label(i).value() * f[i];
        }
        members.push(h);
        log.push(error, normalizer, additive_loglik(&margins));
    }

    Ok(TrainedModel {
        algorithm: Algorithm::RealAdaBoost,
        ensemble: Ensemble::ConfidenceRated(ConfidenceRatedEnsemble { members }),
        traces: log.traces,
        config: *cfg,
        stop: StopReason::RoundLimit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label::{Negative as N, Positive as P};
    use approx::assert_abs_diff_eq;

    #[test]
    fn half_probability_has_zero_confidence() {
        let h = LogisticHypothesis { feature_index: 0, weight: 0.0, bias: 0.0 };
        assert_eq!(confidence(&h, &[3.0]), 0.0);
        let w = WeightDistribution::from_simplex(vec![0.2, 0.8]).unwrap();
        let f = [confidence(&h, &[1.0]), confidence(&h, &[2.0])];
        assert_eq!(update_weights_real(&w, &f, &[P, N]).unwrap(), w);
    }

    #[test]
    fn hand_weight_update() {
        let w = WeightDistribution::uniform(2).unwrap();
        let next = update_weights_real(&w, &[0.5, -0.5], &[P, P]).unwrap();
        let a = 0.5 * (-0.5f64).exp();
        let b = 0.5 * 0.5f64.exp();
        assert_abs_diff_eq!(a, 0.3033, epsilon = 1e-4);
        assert_abs_diff_eq!(b, 0.8244, epsilon = 1e-4);
        assert_abs_diff_eq!(next.get(0), a / (a + b), epsilon = 1e-15);
        assert_abs_diff_eq!(next.get(0), 0.2689, epsilon = 1e-4);
        assert_abs_diff_eq!(next.get(1), 0.7311, epsilon = 1e-4);
    }

    #[test]
    fn one_round_separates_ranked_data() {
        let d = Dataset::new(
            [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0].iter().map(|&x| vec![x]).collect(),
            vec![N, N, N, P, P, P],
        )
        .unwrap();
        let m = train_real_adaboost(&d, &BoostConfig::with_rounds(1)).unwrap();
        assert_eq!(m.evaluate(&d).unwrap().accuracy, 1.0);
        assert_eq!(m.traces.len(), 1);
        assert_eq!(m.traces[0].epsilon, 0.0);
    }
}
