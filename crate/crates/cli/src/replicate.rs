//! Unequal color sizes: each point of color `i` is repeated `γ/|X_i|` times
//! (`γ` the least common multiple of the sizes) so that the pipeline sees
//! equal sizes. Copies after the first move by less than `2^-30` so the
//! union stays in general position; selected copies map back to their
//! original point.

use pach_core::cones::sampling::sub_seed;
use pach_core::geometry::{in_general_position, LabeledPointSet, Point};
use pach_core::rational::quantize;
use pach_core::selection::PachCertificate;

use crate::CliError;

const ATTEMPTS: u64 = 10;

pub struct Replication {
    set: LabeledPointSet,
    copies: Vec<usize>,
    original_sizes: Vec<usize>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Replication {
    pub fn new(set: &LabeledPointSet, seed: u64) -> Result<Self, CliError> {
        let sizes = set.color_sizes();
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(CliError::Precondition(format!("color {i} is empty")));
        }
        let gamma = sizes
            .iter()
            .try_fold(1usize, |acc, &s| (acc / gcd(acc, s)).checked_mul(s))
            .ok_or_else(|| CliError::Budget(format!("sizes {sizes:?} overflow")))?;
        let copies: Vec<usize> = sizes.iter().map(|&s| gamma / s).collect();
        if copies.iter().all(|&r| r == 1) {
            return Ok(Replication {
                set: set.clone(),
                copies,
                original_sizes: sizes,
            });
        }
        let mut last = None;
        for attempt in 0..ATTEMPTS {
            let mut counter = 0u64;
            let mut jitter = |x: &Point| {
                let coords = x
                    .coords()
                    .iter()
                    .map(|c| {
                        counter += 1;
                        let u = sub_seed(sub_seed(seed, attempt), counter) as f64 / u64::MAX as f64;
                        c + quantize((2.0 * u - 1.0) * 1e-10, 60)
                    })
                    .collect();
                Point::new(coords)
            };
            let colors: Vec<Vec<Point>> = set
                .colors()
                .iter()
                .zip(&copies)
                .map(|(c, &r)| {
                    c.iter()
                        .flat_map(|x| {
                            let mut out = vec![x.clone()];
                            out.extend((1..r).map(|_| jitter(x)));
                            out
                        })
                        .collect()
                })
                .collect();
            let replicated = LabeledPointSet::new(set.dim(), set.is_exact(), colors)
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            if in_general_position(&replicated) {
                last = Some(replicated);
                break;
            }
            last = Some(replicated);
        }
        Ok(Replication {
            set: last.expect("at least one attempt"),
            copies,
            original_sizes: sizes,
        })
    }

    pub fn set(&self) -> &LabeledPointSet {
        &self.set
    }

    pub fn is_identity(&self) -> bool {
        self.copies.iter().all(|&r| r == 1)
    }

    /// Original indices of the selected copies, without repeats.
    pub fn map_back(&self, mut cert: PachCertificate) -> PachCertificate {
        for (i, y) in cert.y.iter_mut().enumerate() {
            let mut orig: Vec<usize> = y.iter().map(|&t| t / self.copies[i]).collect();
            orig.sort_unstable();
            orig.dedup();
            *y = orig;
        }
        cert.fractions = cert
            .y
            .iter()
            .zip(&self.original_sizes)
            .map(|(y, &n)| y.len() as f64 / n as f64)
            .collect();
        cert
    }
}
