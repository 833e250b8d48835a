//! Random instances: uniform in the ball, Gaussian, and centrally symmetric.

use num::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstructionError;
use crate::cones::sampling::{gaussian, in_unit_ball};
use crate::geometry::{in_general_position, LabeledPointSet, Point};
use crate::rational::{quantize, Rational};

/// Coordinates are rounded to multiples of `2^-QUANT_BITS`.
pub const QUANT_BITS: u32 = 20;
const RETRIES: u64 = 50;

pub(crate) fn quantized(x: &[f64]) -> Point {
    Point::new(x.iter().map(|&v| quantize(v, QUANT_BITS)).collect())
}

pub(crate) fn norm_sq(p: &Point) -> Rational {
    p.coords().iter().map(|c| c * c).sum()
}

pub(crate) fn strictly_inside_ball(p: &Point) -> bool {
    norm_sq(p) < Rational::one()
}

fn ball_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    loop {
        let p = quantized(&in_unit_ball(rng, d));
        if strictly_inside_ball(&p) {
            return p;
        }
    }
}

fn generate(
    d: usize,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<Vec<Point>>,
) -> Result<LabeledPointSet, ConstructionError> {
    if d == 0 {
        return Err(crate::geometry::GeometryError::ZeroDimension.into());
    }
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let set = LabeledPointSet::new(d, true, draw(&mut rng))?;
        if in_general_position(&set) {
            return Ok(set);
        }
    }
    Err(ConstructionError::RetriesExhausted("general position"))
}

/// `n` points per color, uniform in the open unit ball.
pub fn uniform_ball_instance(
    d: usize,
    n: usize,
    seed: u64,
) -> Result<LabeledPointSet, ConstructionError> {
    generate(d, seed, |rng| {
        (0..=d)
            .map(|_| (0..n).map(|_| ball_point(rng, d)).collect())
            .collect()
    })
}

/// `n` standard Gaussian points per color.
pub fn gaussian_instance(
    d: usize,
    n: usize,
    seed: u64,
) -> Result<LabeledPointSet, ConstructionError> {
    generate(d, seed, |rng| {
        (0..=d)
            .map(|_| (0..n).map(|_| quantized(&gaussian(rng, d))).collect())
            .collect()
    })
}

/// Every color is centrally symmetric about the origin: `n/2` random ball
/// points and their negatives. A rainbow simplex of such a configuration
/// contains the origin with frequency about `2^-d` overall.
///
/// Only `d <= 2`: in higher dimension `x, -x, y, -y` are coplanar.
pub fn symmetric_instance(
    d: usize,
    n: usize,
    seed: u64,
) -> Result<LabeledPointSet, ConstructionError> {
    if d > 2 {
        return Err(ConstructionError::Parameter(format!(
            "symmetric instances are degenerate in dimension {d}"
        )));
    }
    if !n.is_multiple_of(2) || n == 0 {
        return Err(ConstructionError::Parameter(format!(
            "symmetric instances need an even positive n, got {n}"
        )));
    }
    generate(d, seed, |rng| {
        (0..=d)
            .map(|_| {
                let half: Vec<Point> = (0..n / 2).map(|_| ball_point(rng, d)).collect();
                let neg: Vec<Point> = half
                    .iter()
                    .map(|p| Point::new(p.coords().iter().map(|c| -c).collect()))
                    .collect();
                half.into_iter().chain(neg).collect()
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_points_are_inside_and_reproducible() {
        let a = uniform_ball_instance(2, 10, 4).unwrap();
        let b = uniform_ball_instance(2, 10, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.color_sizes(), vec![10, 10, 10]);
        assert!(a.points().all(strictly_inside_ball));
    }

    #[test]
    fn symmetric_colors_are_symmetric() {
        let s = symmetric_instance(2, 6, 1).unwrap();
        for c in s.colors() {
            for k in 0..3 {
                let neg: Vec<Rational> = c[k].coords().iter().map(|x| -x).collect();
                assert_eq!(c[k + 3].coords(), &neg[..]);
            }
        }
        assert!(symmetric_instance(2, 5, 1).is_err());
        assert!(symmetric_instance(3, 4, 1).is_err());
    }

    #[test]
    fn gaussian_has_requested_shape() {
        let g = gaussian_instance(3, 4, 2).unwrap();
        assert_eq!(g.color_sizes(), vec![4; 4]);
    }
}
