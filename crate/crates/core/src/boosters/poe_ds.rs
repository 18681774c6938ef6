use super::{compute_alpha, Algorithm, BoostConfig, Ensemble, RoundLog, StopReason, TrainedModel, UNINFORMATIVE_TOLERANCE};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::experts::{StumpFitter, StumpHypothesis};
use crate::poe::{EnsembleKind, EnsembleState, Expert, PoEEnsemble};
use crate::weights::WeightDistribution;

/// Absorbs a stump expert with error parameter `p_e` into `state` and
/// returns the new weights `D_i ∝ P(ȳ_i | x_i, ensemble)`.
///
/// Each point's expert probability is `1 − P_e` when the stump is right and
/// `P_e` when it is wrong. This equals AdaBoost's `D e^{−y h α}` rescaled
/// per point by `1/Q_i`, `Q_i = e^{y h α} P(y_i|…) + e^{−y h α} P(ȳ_i|…)`.
pub fn update_weights_ds(
    state: &mut EnsembleState,
    h: &StumpHypothesis,
    p_e: f64,
    d: &Dataset,
) -> Result<WeightDistribution> {
    if state.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: d.len(),
            actual: state.len(),
        });
    }
    let agree = (1.0 - p_e).ln() - p_e.ln();
    let lo: Vec<f64> = (0..d.len())
        .map(|i| {
            if h.predict(d.row(i)) == d.label(i) {
                agree
            } else {
                -agree
            }
        })
        .collect();
    state.absorb_log_odds(&lo)?;
    Ok(state.complement_weights())
}

/// POEBoost.DS: stumps selected by weighted error, `P_e = max(ε, floor)`,
/// weights from the product-of-experts posterior.
pub fn train_poeboost_ds(d: &Dataset, cfg: &BoostConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    let fitter = StumpFitter::new(d);
    let mut state = EnsembleState::uniform(d.len());
    let mut w = state.complement_weights();
    let mut ensemble = PoEEnsemble::new(EnsembleKind::Ds);
    let mut log = RoundLog::new();
    let mut stop = StopReason::RoundLimit;

    for round in 1..=cfg.rounds {
        let (stump, eps) = fitter.fit(&w)?;
        if eps >= 0.5 - UNINFORMATIVE_TOLERANCE && cfg.stop_on_weak_failure {
            if ensemble.is_empty() {
                return Err(Error::WeakLearner {
                    round,
                    reason: format!("best stump has weighted error {eps}"),
                });
            }
            stop = StopReason::WeakLearner { round, score: eps };
            break;
        }
        let p_e = eps.clamp(cfg.p_e_floor, 0.5);
        let alpha = compute_alpha(p_e)?;
        w = update_weights_ds(&mut state, &stump, p_e, d)?;
        ensemble.push(Expert::discrete(stump, p_e)?)?;
        log.push(eps, alpha, state.loglik());

        if eps < cfg.p_e_floor && cfg.stop_on_weak_failure {
            stop = StopReason::PerfectFit { round };
            break;
        }
    }

    Ok(TrainedModel {
        algorithm: Algorithm::PoeboostDs,
        ensemble: Ensemble::ProductOfExperts(ensemble),
        traces: log.traces,
        config: *cfg,
        stop,
    })
}
