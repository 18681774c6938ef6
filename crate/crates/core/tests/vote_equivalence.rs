use poeboost::experts::StumpHypothesis;
use poeboost::poe::{EnsembleKind, Expert, PoEEnsemble};
use poeboost::Label;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ensemble<R: Rng>(rng: &mut R, features: usize) -> PoEEnsemble {
    let m = rng.random_range(1..=12);
    let experts = (0..m)
        .map(|_| {
            let h = StumpHypothesis::new(
                rng.random_range(0..features),
                rng.random_range(-2.0..2.0),
                if rng.random_bool(0.5) { Label::Positive } else { Label::Negative },
            );
            // Repeated error levels make exact vote ties reachable.
            let p_e = if rng.random_bool(0.3) { 0.25 } else { rng.random_range(1e-6..=0.5) };
            Expert::discrete(h, p_e).unwrap()
        })
        .collect();
    PoEEnsemble::from_experts(EnsembleKind::Ds, experts).unwrap()
}

#[test]
fn product_prediction_is_the_sign_of_the_weighted_vote() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut ties = 0;
    for _ in 0..300 {
        let e = random_ensemble(&mut rng, 3);
        for _ in 0..300 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let vote = e.weighted_vote(&x).unwrap();
            ties += usize::from(vote == 0.0);
            assert_eq!(e.predict_label(&x).unwrap(), Label::from_sign(vote));
            // The normalized product agrees with the vote up to rounding.
            let (lp, lm) = e.log_class_scores(&x);
            assert!((lp - lm - 2.0 * vote).abs() <= 1e-9 * (1.0 + vote.abs()));
            let (p, _) = e.posterior(&x).unwrap();
            assert_eq!(p >= 0.5, vote >= 0.0);
        }
    }
    assert!(ties > 0);
}
