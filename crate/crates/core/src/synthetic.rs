//! Synthetic datasets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;

/// `n` points from two unit-variance spherical Gaussians in `dims`
/// dimensions, class means at `(±offset, 0, …, 0)`. Exactly `n/2`
/// negatives come first, then the positives.
pub fn two_gaussians(n: usize, offset: f64, dims: usize, seed: u64) -> Result<Dataset> {
    if n < 2 || dims == 0 {
        return Err(Error::InvalidDataset(format!("need n ≥ 2 and dims ≥ 1, got {n} and {dims}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i < n / 2 { Label::Negative } else { Label::Positive };
        let row: Vec<f64> = (0..dims)
            .map(|k| {
                let z: f64 = StandardNormal.sample(&mut rng);
                if k == 0 {
                    z + y.value() * offset
                } else {
                    z
                }
            })
            .collect();
        rows.push(row);
        labels.push(y);
    }
    Dataset::new(rows, labels)
}

/// The four corners of the unit square labelled by XOR of the coordinates.
pub fn xor4() -> Dataset {
    Dataset::new(
        vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
        vec![Label::Negative, Label::Positive, Label::Positive, Label::Negative],
    )
    .expect("fixed dataset is valid")
}
