//! Reproducible Monte Carlo sampling.
//!
//! Stream-splitting rule: sample `i` of a run seeded with `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`. Samples are
//! therefore independent of how they are distributed over worker threads,
//! and results are collected in sample order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Evaluates `f` on `samples` independent streams, in parallel, returning
/// results in sample order.
pub fn monte_carlo<T, F>(samples: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SampleRng) -> T + Sync,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|i| f(&mut sample_rng(seed, i)))
        .collect()
}

/// Mean, standard error and empirical distribution of one statistic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub samples: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub std_error: f64,
    #[serde(skip)]
    sorted: Vec<f64>,
}

impl SampleSummary {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Self {
        let mut sorted: Vec<f64> = values.into_iter().collect();
        sorted.sort_by(f64::total_cmp);
        let k = sorted.len();
        let mean = if k == 0 {
            f64::NAN
        } else {
            sorted.iter().sum::<f64>() / k as f64
        };
        let std_error = if k < 2 {
            f64::NAN
        } else {
            let var = sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        };
        SampleSummary {
            samples: k,
            mean,
            std_error,
            sorted,
        }
    }

    /// Empirical CDF at `x`: fraction of samples `<= x`.
    pub fn quantile_of(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return f64::NAN;
        }
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    /// Distance of `expected` from the sample mean in standard errors.
    pub fn z_score(&self, expected: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == expected {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - expected) / self.std_error
        }
    }
}
