use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{ConeError, SimplicialCone};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcuteDeviation {
    /// Largest generator displacement `max_j ‖g_j - g'_j‖`.
    pub delta: f64,
    /// `2 d^2 δ`.
    pub bound: f64,
    pub observed_max: f64,
    pub samples: u64,
}

fn check_acute(c: &SimplicialCone) -> Result<(), ConeError> {
    let g = c.generators();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let dot: f64 = g[i].iter().zip(&g[j]).map(|(a, b)| a * b).sum();
            if dot <= 0.0 {
                return Err(ConeError::NotAcute(i, j));
            }
        }
    }
    Ok(())
}

fn normalized_combination(gens: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    let d = gens[0].len();
    let mut v = vec![0.0; d];
    for (g, l) in gens.iter().zip(lambda) {
        for (x, y) in v.iter_mut().zip(g) {
            *x += l * y;
        }
    }
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// Samples admissible unit vectors of `perturbed` (normalized convex
/// combinations of its generators) and compares each with the vector built
/// from the same weights on `base`.
pub fn acute_cone_admissible_deviation(
    base: &SimplicialCone,
    perturbed: &SimplicialCone,
    samples: u64,
    seed: u64,
) -> Result<AcuteDeviation, ConeError> {
    let d = base.dim();
    if perturbed.dim() != d {
        return Err(ConeError::Shape {
            expected: d,
            dim: d,
        });
    }
    if base.apex() != perturbed.apex() {
        return Err(ConeError::ApexNotOrigin);
    }
    check_acute(base)?;
    check_acute(perturbed)?;
    let delta = base
        .generators()
        .iter()
        .zip(perturbed.generators())
        .map(|(g, h)| {
            g.iter()
                .zip(h)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed_max: f64 = 0.0;
    for _ in 0..samples {
        // Flat Dirichlet weights from normalized exponentials.
        let raw: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = raw.iter().sum();
        let lambda: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let v = normalized_combination(base.generators(), &lambda);
        let w = normalized_combination(perturbed.generators(), &lambda);
        let dist = v
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        observed_max = observed_max.max(dist);
    }
    Ok(AcuteDeviation {
        delta,
        bound: 2.0 * (d * d) as f64 * delta,
        observed_max,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotate(v: &[f64], t: f64) -> Vec<f64> {
        vec![
            v[0] * t.cos() - v[1] * t.sin(),
            v[0] * t.sin() + v[1] * t.cos(),
        ]
    }

    #[test]
    fn identical_cones_have_zero_deviation() {
        let c = SimplicialCone::at_origin(vec![vec![1.0, 0.2], vec![0.3, 1.0]]).unwrap();
        let r = acute_cone_admissible_deviation(&c, &c, 1000, 1).unwrap();
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.observed_max, 0.0);
    }

    #[test]
    fn rotated_planar_cone() {
        let g = vec![vec![1.0, 0.1], vec![0.2, 1.0]];
        let c = SimplicialCone::at_origin(g.clone()).unwrap();
        let theta = 0.01;
        let rotated = c.generators().iter().map(|v| rotate(v, theta)).collect();
        let c2 = SimplicialCone::at_origin(rotated).unwrap();
        let r = acute_cone_admissible_deviation(&c, &c2, 10_000, 2).unwrap();
        assert!((r.delta - 2.0 * (theta / 2.0).sin()).abs() < 1e-12);
        assert!(r.observed_max <= r.bound);
        assert!(r.bound <= 8.0 * r.delta + 1e-15);
    }

    #[test]
    fn perturbed_acute_cone_in_r3() {
        let base = SimplicialCone::at_origin(vec![
            vec![1.0, 0.1, 0.1],
            vec![0.1, 1.0, 0.1],
            vec![0.1, 0.1, 1.0],
        ])
        .unwrap();
        let moved = base
            .generators()
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let mut h = g.clone();
                h[(k + 1) % 3] += 1e-3;
                h
            })
            .collect();
        let pert = SimplicialCone::at_origin(moved).unwrap();
        let r = acute_cone_admissible_deviation(&base, &pert, 10_000, 3).unwrap();
        assert!(r.delta < 1.1e-3);
        assert!(r.observed_max <= r.bound);
    }

    #[test]
    fn orthant_is_not_acute() {
        let o = SimplicialCone::at_origin(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(
            acute_cone_admissible_deviation(&o, &o, 10, 0),
            Err(ConeError::NotAcute(0, 1))
        );
    }
}
