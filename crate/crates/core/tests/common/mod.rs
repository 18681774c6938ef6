#![allow(dead_code)]

use poeboost::{Dataset, Label, WeightDistribution};
use rand::Rng;

/// Random dataset with at least one point of each class. Half the time the
/// features take few distinct values so that ties are common.
pub fn random_dataset<R: Rng>(rng: &mut R, max_n: usize, max_f: usize) -> Dataset {
    let n = rng.random_range(2..=max_n);
    let f = rng.random_range(1..=max_f);
    let coarse = rng.random_bool(0.5);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..f)
                .map(|_| {
                    if coarse {
                        rng.random_range(0..4) as f64
                    } else {
                        rng.random_range(-3.0..3.0)
                    }
                })
                .collect()
        })
        .collect();
    let mut labels: Vec<Label> = (0..n)
        .map(|_| if rng.random_bool(0.5) { Label::Positive } else { Label::Negative })
        .collect();
    labels[0] = Label::Positive;
    labels[1] = Label::Negative;
    Dataset::new(rows, labels).unwrap()
}

pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> WeightDistribution {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(1e-3..1.0)).collect();
    WeightDistribution::from_unnormalized(raw).unwrap()
}

/// Weights that are multiples of 1/64, so every partial sum is exact.
pub fn dyadic_simplex<R: Rng>(rng: &mut R, n: usize) -> WeightDistribution {
    let mut units = vec![0u32; n];
    for _ in 0..64 {
        units[rng.random_range(0..n)] += 1;
    }
    WeightDistribution::from_simplex(units.iter().map(|&u| u as f64 / 64.0).collect()).unwrap()
}
