//! Corner-volume audits: the smallest corner region of a separating
//! arrangement, restricted to the unit ball, against `2^d·msa(Δ(H))·β_d`.

use serde::{Deserialize, Serialize};

use super::grid::{generate_grid_ball, GridBallConfig};
use super::instances::strictly_inside_ball;
use super::ConstructionError;
use crate::arrangement::HyperplaneArrangement;
use crate::cones::bounds::{ball_volume, BoundTable};
use crate::cones::sampling::{classify_counts, in_unit_ball, sub_seed, Estimate};
use crate::cones::{msa_mc, MsaEstimate, Simplex};
use crate::geometry::Point;
use crate::rational::to_f64;
use crate::selection::{
    run_pipeline, separating_arrangement, shrink_to_generic, GenericPachConfiguration,
    PipelineParams,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerAudit {
    pub arrangement: HyperplaneArrangement,
    /// `Vol(C_i ∩ B^d)` estimates.
    pub volumes: Vec<Estimate>,
    pub min_volume: f64,
    pub argmin: usize,
    pub msa: MsaEstimate,
    /// `2^d·msa·β_d` with the estimated msa.
    pub bound: f64,
    /// Combined standard error of `min_volume - bound`.
    pub sigma: f64,
    pub pass: bool,
}

/// Estimates every `Vol(C_i ∩ B^d)` from one stream of uniform ball samples
/// and `msa(Δ(H))` from direction samples at its vertices.
pub fn corner_volume_audit(
    cfg: &GenericPachConfiguration,
    samples: u64,
    seed: u64,
) -> Result<CornerAudit, ConstructionError> {
    if let Some(x) = cfg
        .colors()
        .iter()
        .flatten()
        .chain(std::iter::once(cfg.p()))
        .find(|x| !strictly_inside_ball(x))
    {
        return Err(ConstructionError::OutsideBall(format!("{x:?}")));
    }
    let d = cfg.dim();
    let arrangement = separating_arrangement(cfg, sub_seed(seed, 0))?;
    let volumes = corner_volumes(&arrangement, samples, sub_seed(seed, 1));
    let simplex = Simplex::from_points(arrangement.vertices())?;
    let msa = msa_mc(&simplex, samples, sub_seed(seed, 2))?;
    let mut argmin = 0;
    for (i, v) in volumes.iter().enumerate() {
        if v.mean < volumes[argmin].mean {
            argmin = i;
        }
    }
    let factor = (d as f64).exp2() * ball_volume(d);
    let bound = factor * msa.value;
    let sigma = volumes[argmin].std_error.hypot(factor * msa.std_error);
    let min_volume = volumes[argmin].mean;
    Ok(CornerAudit {
        arrangement,
        pass: min_volume <= bound + 3.0 * sigma,
        min_volume,
        argmin,
        volumes,
        msa,
        bound,
        sigma,
    })
}

/// `Vol(C_i ∩ B^d)` for every corner region; a sample may lie in several.
pub fn corner_volumes(arr: &HyperplaneArrangement, samples: u64, seed: u64) -> Vec<Estimate> {
    let d = arr.dim();
    let planes: Vec<(Vec<f64>, f64)> = arr
        .hyperplanes()
        .iter()
        .map(|h| (h.normal().iter().map(to_f64).collect(), to_f64(h.offset())))
        .collect();
    let classes = 1usize << (d + 1);
    let counts = classify_counts(samples, seed, classes, |rng| {
        let x = in_unit_ball(rng, d);
        let positive: Vec<bool> = planes
            .iter()
            .map(|(a, b)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>() >= *b)
            .collect();
        let mut mask = 0;
        for i in 0..=d {
            if (0..=d).filter(|&j| j != i).all(|j| positive[j]) {
                mask |= 1 << i;
            }
        }
        Some(mask)
    });
    let beta = ball_volume(d);
    (0..=d)
        .map(|i| {
            let hits: u64 = (0..classes)
                .filter(|m| m >> i & 1 == 1)
                .map(|m| counts[m])
                .sum();
            Estimate::from_count(hits, samples).scaled(beta)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundReport {
    pub dim: usize,
    pub eps: f64,
    pub seed: u64,
    pub n: usize,
    /// `|Y_i| / n` after shrinking to a generic configuration.
    pub fractions: Vec<f64>,
    pub min_fraction: f64,
    /// `g(d) = 2^d·u(d)`.
    pub g: f64,
    pub g_clamped: bool,
    /// `Vol(C_i ∩ B^d) / β_d`.
    pub volume_ratios: Vec<Estimate>,
    /// The corner with the smallest measured volume.
    pub corner: usize,
    /// `|Y_corner| / n <= Vol(C_corner ∩ B^d)/β_d + 3σ`.
    pub count_within_volume: bool,
    pub audit: CornerAudit,
    pub removed_per_color: Vec<usize>,
}

/// Grid-ball instance, full pipeline, shrink to a generic configuration, and
/// the corner audit. Counts of the selected subsets are compared with the
/// measured volume ratios in place of the vanishing-`ε` limit.
pub fn upper_bound_witness(
    grid_cfg: &GridBallConfig,
    params: &PipelineParams,
    samples: u64,
) -> Result<UpperBoundReport, ConstructionError> {
    let d = grid_cfg.dim;
    let grid = generate_grid_ball(grid_cfg)?;
    let cert = run_pipeline(&grid.set, params)?;
    let colors: Vec<Vec<Point>> = cert
        .y
        .iter()
        .enumerate()
        .map(|(i, ys)| ys.iter().map(|&t| grid.set.color(i)[t].clone()).collect())
        .collect();
    let sizes_before: Vec<usize> = colors.iter().map(Vec::len).collect();
    let shrink = shrink_to_generic(
        colors,
        &cert.p,
        sub_seed(params.seed, 100),
        grid_cfg.condition_g_cap,
    )?;
    let audit = corner_volume_audit(&shrink.config, samples, sub_seed(params.seed, 101))?;
    let n = grid.n;
    let fractions: Vec<f64> = shrink
        .config
        .sizes()
        .iter()
        .map(|&s| s as f64 / n as f64)
        .collect();
    let beta = ball_volume(d);
    let volume_ratios: Vec<Estimate> = audit.volumes.iter().map(|v| v.scaled(1.0 / beta)).collect();
    let corner = audit.argmin;
    let count_within_volume =
        fractions[corner] <= volume_ratios[corner].mean + 3.0 * volume_ratios[corner].std_error;
    let table = BoundTable::for_dim(d);
    Ok(UpperBoundReport {
        dim: d,
        eps: grid_cfg.eps,
        seed: params.seed,
        n,
        min_fraction: fractions.iter().copied().fold(f64::INFINITY, f64::min),
        removed_per_color: sizes_before
            .iter()
            .zip(shrink.config.sizes())
            .map(|(a, b)| a - b)
            .collect(),
        fractions,
        g: table.g,
        g_clamped: table.clamped,
        volume_ratios,
        corner,
        count_within_volume,
        audit,
    })
}
