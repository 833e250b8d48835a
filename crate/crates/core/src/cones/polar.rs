use super::bounds::ball_volume;
use super::sampling::{self, gaussian, Estimate};
use super::{columns, in_cone, ConeError, SimplicialCone};

/// `C* = {x : x·y <= 0 for all y in C}`, generated by the columns of
/// `-V^{-T}` for the generator matrix `V`.
pub fn polar_cone(c: &SimplicialCone) -> Result<SimplicialCone, ConeError> {
    c.require_origin()?;
    let inv = columns(c.generators())
        .try_inverse()
        .filter(|_| c.is_nondegenerate())
        .ok_or(ConeError::SingularGenerators)?;
    let w = -inv.transpose();
    let d = c.dim();
    let gens = (0..d)
        .map(|j| (0..d).map(|r| w[(r, j)]).collect())
        .collect();
    SimplicialCone::at_origin(gens)
}

/// `Vol(C ∩ B^d)` as `β_d` times the fraction of directions inside `C`
/// (a cone meets every sphere about its apex in the same proportion).
pub fn restricted_volume_mc(
    c: &SimplicialCone,
    samples: u64,
    seed: u64,
) -> Result<Estimate, ConeError> {
    c.require_origin()?;
    if samples == 0 {
        return Err(ConeError::NoSamples);
    }
    let m = c.membership_matrix()?;
    let d = c.dim();
    let frac = sampling::fraction(samples, seed, |rng| in_cone(&m, &gaussian(rng, d)));
    Ok(frac.scaled(ball_volume(d)))
}

/// Generator-wise distance after greedy matching; used to test `(C*)* = C`.
pub fn generator_mismatch(a: &SimplicialCone, b: &SimplicialCone) -> f64 {
    let mut used = vec![false; b.generators().len()];
    let mut worst: f64 = 0.0;
    for g in a.generators() {
        let mut best = (usize::MAX, f64::INFINITY);
        for (k, h) in b.generators().iter().enumerate() {
            if used[k] {
                continue;
            }
            let dist = g
                .iter()
                .zip(h)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            if dist < best.1 {
                best = (k, dist);
            }
        }
        if best.0 == usize::MAX {
            return f64::INFINITY;
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::sampling::chunk_rng;
    use std::f64::consts::PI;

    #[test]
    fn quadrant_polar_is_opposite_quadrant() {
        let c = SimplicialCone::at_origin(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let p = polar_cone(&c).unwrap();
        let expect = SimplicialCone::at_origin(vec![vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(generator_mismatch(&p, &expect) < 1e-12);
    }

    #[test]
    fn dependent_generators_error() {
        let c = SimplicialCone::at_origin(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(polar_cone(&c), Err(ConeError::SingularGenerators));
    }

    #[test]
    fn polar_is_an_involution() {
        let mut rng = chunk_rng(11, 0);
        for d in 2..5 {
            for _ in 0..20 {
                let gens = (0..d).map(|_| gaussian(&mut rng, d)).collect();
                let c = SimplicialCone::at_origin(gens).unwrap();
                let back = polar_cone(&polar_cone(&c).unwrap()).unwrap();
                assert!(generator_mismatch(&c, &back) < 1e-9);
            }
        }
    }

    #[test]
    fn orthant_volumes() {
        let q = SimplicialCone::at_origin(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = restricted_volume_mc(&q, 200_000, 1).unwrap();
        assert!((v.mean - PI / 4.0).abs() < 4.0 * v.std_error + 1e-3);
        let o = SimplicialCone::at_origin(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let v = restricted_volume_mc(&o, 200_000, 2).unwrap();
        assert!((v.mean - (4.0 * PI / 3.0) / 8.0).abs() < 4.0 * v.std_error + 1e-3);
        // Quadrant plus its polar quadrant is half the disk.
        let pq = restricted_volume_mc(&polar_cone(&q).unwrap(), 200_000, 3).unwrap();
        let half = (restricted_volume_mc(&q, 200_000, 1).unwrap().mean + pq.mean) / PI;
        assert!((half - 0.5).abs() < 0.01);
    }

    #[test]
    fn apex_must_be_origin() {
        let c = SimplicialCone::new(vec![1.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(polar_cone(&c), Err(ConeError::ApexNotOrigin));
    }
}
