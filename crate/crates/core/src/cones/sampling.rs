//! Deterministic, chunk-parallel Monte Carlo.
//!
//! Samples are split into fixed-size chunks; chunk `k` draws from a ChaCha8
//! stream keyed by `(seed, k)`. Results therefore do not depend on the number
//! of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const CHUNK: u64 = 1 << 14;

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_count(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Estimate {
            mean: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Estimate {
            mean: self.mean * factor,
            std_error: self.std_error * factor,
            samples: self.samples,
        }
    }
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Derives an independent sub-seed, e.g. one per vertex or per trial.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    // SplitMix64 finalizer on the combined word.
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counts, per class, how many of `samples` draws `classify` assigns to it.
/// `None` means unclassified.
pub fn classify_counts<F>(samples: u64, seed: u64, classes: usize, classify: F) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng) -> Option<usize> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(seed, k);
            let n = CHUNK.min(samples - k * CHUNK);
            let mut counts = vec![0u64; classes];
            for _ in 0..n {
                if let Some(c) = classify(&mut rng) {
                    counts[c] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; classes],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

pub fn fraction<F>(samples: u64, seed: u64, hit: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let counts = classify_counts(samples, seed, 1, |rng| hit(rng).then_some(0));
    Estimate::from_count(counts[0], samples)
}

/// Standard Gaussian vector; its direction is uniform on the sphere.
pub fn gaussian<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn unit_direction<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, d);
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point of the closed unit ball.
pub fn in_unit_ball<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    let dir = unit_direction(rng, d);
    let r = rng.random::<f64>().powf(1.0 / d as f64);
    dir.into_iter().map(|x| x * r).collect()
}
