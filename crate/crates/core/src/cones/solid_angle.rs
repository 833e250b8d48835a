use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{self, classify_counts, gaussian, sub_seed, Estimate};
use super::{in_cone, ConeError, Simplex};

/// Fraction of directions at vertex `i` that point into the simplex.
pub fn solid_angle_mc(
    simplex: &Simplex,
    i: usize,
    samples: u64,
    seed: u64,
) -> Result<Estimate, ConeError> {
    if samples == 0 {
        return Err(ConeError::NoSamples);
    }
    let m = simplex.vertex_cone(i)?.membership_matrix()?;
    let d = simplex.dim();
    // Gaussian vectors need no normalization: membership is scale invariant.
    Ok(sampling::fraction(samples, seed, |rng| {
        in_cone(&m, &gaussian(rng, d))
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsaEstimate {
    pub value: f64,
    pub argmin: usize,
    pub std_error: f64,
    pub per_vertex: Vec<Estimate>,
}

/// Minimum of the per-vertex solid-angle estimates; ties go to the lowest index.
pub fn msa_mc(simplex: &Simplex, samples: u64, seed: u64) -> Result<MsaEstimate, ConeError> {
    let per_vertex = (0..=simplex.dim())
        .map(|i| solid_angle_mc(simplex, i, samples, sub_seed(seed, i as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut argmin = 0;
    for (i, e) in per_vertex.iter().enumerate() {
        if e.mean < per_vertex[argmin].mean {
            argmin = i;
        }
    }
    Ok(MsaEstimate {
        value: per_vertex[argmin].mean,
        argmin,
        std_error: per_vertex[argmin].std_error,
        per_vertex,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanCover {
    /// Fraction of sampled directions assigned to some polar cone.
    pub coverage: f64,
    pub fractions: Vec<Estimate>,
    pub max_fraction: f64,
    pub argmax: usize,
    pub std_error: f64,
}

/// Assigns each random direction `x` to the vertex maximizing `x·v_i` (the
/// polar cone of the simplex at that vertex contains `x`).
pub fn normal_fan_cover_check(
    simplex: &Simplex,
    samples: u64,
    seed: u64,
) -> Result<FanCover, ConeError> {
    if samples == 0 {
        return Err(ConeError::NoSamples);
    }
    let d = simplex.dim();
    let verts = simplex.vertices();
    let counts = classify_counts(samples, seed, d + 1, |rng| {
        let x = gaussian(rng, d);
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in verts.iter().enumerate() {
            let dot: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
            if best.is_none_or(|(_, b)| dot > b) {
                best = Some((i, dot));
            }
        }
        best.map(|(i, _)| i)
    });
    let classified: u64 = counts.iter().sum();
    let fractions: Vec<Estimate> = counts
        .iter()
        .map(|&c| Estimate::from_count(c, samples))
        .collect();
    let mut argmax = 0;
    for (i, f) in fractions.iter().enumerate() {
        if f.mean > fractions[argmax].mean {
            argmax = i;
        }
    }
    Ok(FanCover {
        coverage: classified as f64 / samples as f64,
        max_fraction: fractions[argmax].mean,
        std_error: fractions[argmax].std_error,
        argmax,
        fractions,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MsaSearch {
    pub dim: usize,
    pub trials: usize,
    pub best: MsaEstimate,
    pub best_vertices: Vec<Vec<f64>>,
    /// Asymptotic regular-simplex value, for comparison only.
    pub reference: f64,
}

/// Random search for simplices with large minimum solid angle. Reports the
/// best one seen; it makes no claim about the true maximum.
pub fn msa_random_search(
    d: usize,
    trials: usize,
    samples: u64,
    seed: u64,
) -> Result<MsaSearch, ConeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(MsaEstimate, Simplex)> = None;
    for t in 0..trials {
        let s = Simplex::random(&mut rng, d);
        let est = msa_mc(&s, samples, sub_seed(seed, t as u64))?;
        if best.as_ref().is_none_or(|(b, _)| est.value > b.value) {
            best = Some((est, s));
        }
    }
    let (best, simplex) = best.ok_or(ConeError::NoSamples)?;
    Ok(MsaSearch {
        dim: d,
        trials,
        best,
        best_vertices: simplex.vertices().to_vec(),
        reference: super::bounds::rho_d_asymptotic(d),
    })
}
