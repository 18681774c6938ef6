mod common;

use poeboost::boosters::{compute_alpha, train_adaboost, train_poeboost_ds, update_weights_adaboost, update_weights_ds};
use poeboost::experts::StumpFitter;
use poeboost::poe::{max_log_odds, EnsembleState, DEFAULT_P_E_FLOOR};
use poeboost::{BoostConfig, WeightDistribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn first_round_weights_match_adaboost() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let d = common::random_dataset(&mut rng, 40, 4);
        let fitter = StumpFitter::new(&d);
        let w = WeightDistribution::uniform(d.len()).unwrap();
        let (h, eps) = fitter.fit(&w).unwrap();
        if eps >= 0.5 - 1e-12 {
            continue;
        }
        let p_e = eps.max(DEFAULT_P_E_FLOOR);
        let ada = update_weights_adaboost(&w, &h, compute_alpha(p_e).unwrap(), &d).unwrap();
        let mut state = EnsembleState::uniform(d.len());
        let ds = update_weights_ds(&mut state, &h, p_e, &d).unwrap();
        for i in 0..d.len() {
            assert!((ada.get(i) - ds.get(i)).abs() <= 1e-12);
        }
    }
}

#[test]
fn later_rounds_differ_from_adaboost_by_inverse_normalizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let d = common::random_dataset(&mut rng, 40, 4);
        let fitter = StumpFitter::new(&d);
        let mut state = EnsembleState::uniform(d.len());
        for _ in 0..8 {
            let w = state.complement_weights();
            let (h, eps) = fitter.fit(&w).unwrap();
            // Stop where the trainer would: an uninformative or perfect stump.
            if eps >= 0.5 - 1e-12 || eps < DEFAULT_P_E_FLOOR {
                break;
            }
            let p_e = eps.max(DEFAULT_P_E_FLOOR);
            let alpha = compute_alpha(p_e).unwrap();
            let q = state.p_true_vec();
            let ada = update_weights_adaboost(&w, &h, alpha, &d).unwrap();
            let ds = update_weights_ds(&mut state, &h, p_e, &d).unwrap();
            if state.log_odds_vec().iter().any(|z| z.abs() >= max_log_odds()) {
                break;
            }
            // ds_i / ada_i · Q_i is the same constant for every point.
            let scaled: Vec<f64> = (0..d.len())
                .map(|i| {
                    let m = d.label(i).value() * h.predict(d.row(i)).value() * alpha;
                    let big_q = m.exp() * q[i] + (-m).exp() * (1.0 - q[i]);
                    ds.get(i) / ada.get(i) * big_q
                })
                .collect();
            for s in &scaled {
                assert!((s / scaled[0] - 1.0).abs() <= 1e-9, "{scaled:?}");
            }
        }
    }
}

#[test]
fn trainers_agree_on_first_round() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let d = common::random_dataset(&mut rng, 30, 3);
        let cfg = BoostConfig::with_rounds(1);
        let (Ok(a), Ok(p)) = (train_adaboost(&d, &cfg), train_poeboost_ds(&d, &cfg)) else {
            continue;
        };
        let (ta, tp) = (a.traces[0], p.traces[0]);
        assert_eq!((ta.epsilon, ta.alpha_or_p_e), (tp.epsilon, tp.alpha_or_p_e));
        assert_eq!(a.predict_all(&d).unwrap(), p.predict_all(&d).unwrap());
    }
}
