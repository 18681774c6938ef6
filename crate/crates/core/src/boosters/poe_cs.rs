use super::{Algorithm, BoostConfig, Ensemble, RoundLog, StopReason, TrainedModel, UNINFORMATIVE_TOLERANCE};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::experts::{FitCriterion, LogisticFitter, LogisticHypothesis};
use crate::poe::{EnsembleKind, EnsembleState, Expert, PoEEnsemble};
use crate::weights::WeightDistribution;

/// Absorbs a logistic expert with error parameter `p_e` into `state` and
/// returns `D_i ∝ P(ȳ_i | x_i, ensemble)`.
///
/// The expert probability of the true label is
/// `(1 − P_e)·P(Z = y_i | x_i) + P_e·P(Z = ȳ_i | x_i)`.
pub fn update_weights_cs(
    state: &mut EnsembleState,
    h: &LogisticHypothesis,
    p_e: f64,
    d: &Dataset,
) -> Result<WeightDistribution> {
    if state.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: d.len(),
            actual: state.len(),
        });
    }
    let lo: Vec<f64> = (0..d.len())
        .map(|i| {
            let pz = h.proba_of(d.row(i), d.label(i));
            let right = (1.0 - p_e) * pz + p_e * (1.0 - pz);
            let wrong = (1.0 - p_e) * (1.0 - pz) + p_e * pz;
            right.ln() - wrong.ln()
        })
        .collect();
    state.absorb_log_odds(&lo)?;
    Ok(state.complement_weights())
}

/// POEBoost.CS: logistic candidates selected by ε^c, `P_e = max(ε^c, floor)`.
///
/// A round whose best ε^c is ½ or more admits only `P_e = ½`, a no-op
/// expert; training stops there unless `stop_on_weak_failure` is off, in
/// which case the no-op is absorbed.
pub fn train_poeboost_cs(d: &Dataset, cfg: &BoostConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    let fitter = LogisticFitter::new(d);
    let mut state = EnsembleState::uniform(d.len());
    let mut w = state.complement_weights();
    let mut ensemble = PoEEnsemble::new(EnsembleKind::Cs);
    let mut log = RoundLog::new();
    let mut stop = StopReason::RoundLimit;

    for round in 1..=cfg.rounds {
        let (h, eps_c) = fitter.fit(&w, FitCriterion::EpsilonC, cfg.logistic_step)?;
        let p_e = if eps_c >= 0.5 - UNINFORMATIVE_TOLERANCE {
            if cfg.stop_on_weak_failure {
                if ensemble.is_empty() {
                    return Err(Error::WeakLearner {
                        round,
                        reason: format!("best candidate has epsilon_c {eps_c}"),
                    });
                }
                stop = StopReason::WeakLearner { round, score: eps_c };
                break;
            }
            0.5
        } else {
            eps_c.max(cfg.p_e_floor)
        };
        w = update_weights_cs(&mut state, &h, p_e, d)?;
        ensemble.push(Expert::continuous(h, p_e)?)?;
        log.push(eps_c, p_e, state.loglik());
    }

    Ok(TrainedModel {
        algorithm: Algorithm::PoeboostCs,
        ensemble: Ensemble::ProductOfExperts(ensemble),
        traces: log.traces,
        config: *cfg,
        stop,
    })
}
