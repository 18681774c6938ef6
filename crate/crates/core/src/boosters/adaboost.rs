use super::{
    additive_loglik, compute_alpha, AdditiveEnsemble, Algorithm, BoostConfig, Ensemble, RoundLog, StopReason,
    TrainedModel, WeightedStump, UNINFORMATIVE_TOLERANCE,
};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::experts::{StumpFitter, StumpHypothesis};
use crate::weights::WeightDistribution;

/// `D_i ← D_i · e^{−y_i h(x_i) α}`, renormalized.
pub fn update_weights_adaboost(
    w: &WeightDistribution,
    h: &StumpHypothesis,
    alpha: f64,
    d: &Dataset,
) -> Result<WeightDistribution> {
    w.check_len(d.len())?;
    let next = (0..d.len())
        .map(|i| {
            let yh = d.label(i).value() * h.predict(d.row(i)).value();
            w.get(i) * (-yh * alpha).exp()
        })
        .collect();
    WeightDistribution::from_unnormalized(next)
}

/// Discrete AdaBoost with decision stumps.
pub fn train_adaboost(d: &Dataset, cfg: &BoostConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    let fitter = StumpFitter::new(d);
    let mut w = WeightDistribution::uniform(d.len())?;
    let mut margins = vec![0.0; d.len()];
    let mut members = Vec::new();
    let mut log = RoundLog::new();
    let mut stop = StopReason::RoundLimit;

    for round in 1..=cfg.rounds {
        let (stump, eps) = fitter.fit(&w)?;
        if eps >= 0.5 - UNINFORMATIVE_TOLERANCE && cfg.stop_on_weak_failure {
            if members.is_empty() {
                return Err(Error::WeakLearner {
                    round,
                    reason: format!("best stump has weighted error {eps}"),
                });
            }
            stop = StopReason::WeakLearner { round, score: eps };
            break;
        }
        let alpha = compute_alpha(eps.clamp(cfg.p_e_floor, 0.5))?;
        w = update_weights_adaboost(&w, &stump, alpha, d)?;
        for (i, m) in margins.iter_mut().enumerate() {
            *m += alpha * d.label(i).value() * stump.predict(d.row(i)).value();
        }
        members.push(WeightedStump { stump, alpha });
        log.push(eps, alpha, additive_loglik(&margins));

        if eps < cfg.p_e_floor && cfg.stop_on_weak_failure {
            stop = StopReason::PerfectFit { round };
            break;
        }
    }

    Ok(TrainedModel {
        algorithm: Algorithm::AdaBoost,
        ensemble: Ensemble::Additive(AdditiveEnsemble { members }),
        traces: log.traces,
        config: *cfg,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label::{self, Negative as N, Positive as P};
    use crate::weights::SIMPLEX_TOLERANCE;

    fn line(xs: &[f64], ys: &[Label]) -> Dataset {
        Dataset::new(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec()).unwrap()
    }

    #[test]
    fn separable_data_stops_after_one_capped_round() {
        let d = line(&[1.0, 2.0, 3.0, 4.0, 5.0], &[N, N, P, P, P]);
        let m = train_adaboost(&d, &BoostConfig::with_rounds(20)).unwrap();
        assert_eq!(m.traces.len(), 1);
        assert_eq!(m.traces[0].epsilon, 0.0);
        assert_eq!(m.traces[0].alpha_or_p_e, compute_alpha(1e-6).unwrap());
        assert_eq!(m.stop, StopReason::PerfectFit { round: 1 });
        assert_eq!(m.evaluate(&d).unwrap().accuracy, 1.0);
    }

    #[test]
    fn weights_stay_a_simplex() {
        let xs: Vec<f64> = (0..30).map(|i| ((i * 7919) % 31) as f64).collect();
        let ys: Vec<Label> = (0..30).map(|i| if (i * 13) % 5 < 2 { P } else { N }).collect();
        let d = line(&xs, &ys);
        let fitter = StumpFitter::new(&d);
        let mut w = WeightDistribution::uniform(d.len()).unwrap();
        for _ in 0..25 {
            let (h, eps) = fitter.fit(&w).unwrap();
            let alpha = compute_alpha(eps.clamp(1e-6, 0.5)).unwrap();
            w = update_weights_adaboost(&w, &h, alpha, &d).unwrap();
            assert!((w.total() - 1.0).abs() < SIMPLEX_TOLERANCE);
        }
    }

    #[test]
    fn uninformative_first_round_is_an_error() {
        let d = line(&[0.0, 0.0], &[N, P]);
        match train_adaboost(&d, &BoostConfig::with_rounds(5)) {
            Err(Error::WeakLearner { round: 1, .. }) => {}
            other => panic!("expected weak learner error, got {other:?}"),
        }
        let keep_going = BoostConfig {
            stop_on_weak_failure: false,
            ..BoostConfig::with_rounds(5)
        };
        let m = train_adaboost(&d, &keep_going).unwrap();
        assert_eq!(m.traces.len(), 5);
        assert!(m.traces.iter().all(|t| t.alpha_or_p_e == 0.0));
    }
}
