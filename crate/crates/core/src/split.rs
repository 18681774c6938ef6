//! Seeded train/test partitions.
//!
//! Splits are not stratified: a small split may contain a single class.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.75,
            repeats: 10,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn new(train_fraction: f64, repeats: usize, seed: u64) -> Result<Self> {
        let s = SplitSpec {
            train_fraction,
            repeats,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidSplit(format!(
                "train fraction {} is not in (0, 1)",
                self.train_fraction
            )));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidSplit("repeats must be positive".into()));
        }
        Ok(())
    }

    /// Training-set size for `n` points: `round(n · fraction)`.
    pub fn train_size(&self, n: usize) -> Result<usize> {
        self.validate()?;
        let n_train = (n as f64 * self.train_fraction).round() as usize;
        if n_train == 0 || n_train >= n {
            return Err(Error::InvalidSplit(format!(
                "fraction {} of {n} points leaves an empty side",
                self.train_fraction
            )));
        }
        Ok(n_train)
    }
}

/// Sorted train and test index sets for one repeat.
///
/// The shuffle is a ChaCha8 stream keyed by `seed`, with `repeat_index`
/// selecting the stream, so every `(seed, repeat_index)` is reproducible.
pub fn split_indices(n: usize, spec: &SplitSpec, repeat_index: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if repeat_index >= spec.repeats {
        return Err(Error::InvalidSplit(format!(
            "repeat index {repeat_index} >= repeats {}",
            spec.repeats
        )));
    }
    let n_train = spec.train_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(repeat_index as u64);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let (train, test) = order.split_at(n_train);
    let mut train = train.to_vec();
    let mut test = test.to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn train_test_split(d: &Dataset, spec: &SplitSpec, repeat_index: usize) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(d.len(), spec, repeat_index)?;
    Ok((d.subset(&train)?, d.subset(&test)?))
}
