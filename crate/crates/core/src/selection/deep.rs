//! Candidate search for a point lying in many rainbow simplices.

use num::Zero;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hypergraph::RainbowSimplices;
use super::SelectionError;
use crate::geometry::{LabeledPointSet, Mode, Point};
use crate::rational::{small, Rational};

#[derive(Clone, Debug)]
pub struct DeepPointOptions {
    pub seed: u64,
    /// Number of random rainbow-simplex centroids to try.
    pub random_candidates: usize,
    pub extra_candidates: Vec<Point>,
    /// Maximum number of rainbow simplices to enumerate.
    pub budget: u128,
}

impl Default for DeepPointOptions {
    fn default() -> Self {
        DeepPointOptions {
            seed: 0,
            random_candidates: 200,
            extra_candidates: Vec::new(),
            budget: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeepPoint {
    pub p: Point,
    /// Rainbow simplices containing `p` in their closed hull.
    pub depth: u64,
    /// Rainbow simplices containing `p` in their interior.
    pub open_depth: u64,
    pub total: u64,
    /// Which strategy produced `p`.
    pub strategy: String,
}

impl DeepPoint {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.depth as f64 / self.total as f64
        }
    }
}

/// Number of rainbow simplices containing `p`.
pub fn rainbow_depth(set: &LabeledPointSet, p: &Point, mode: Mode) -> u64 {
    RainbowSimplices::from_set(set).count(p, mode)
}

fn median(mut values: Vec<Rational>) -> Rational {
    values.sort();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2].clone()
    } else {
        (&values[n / 2 - 1] + &values[n / 2]) / small(2)
    }
}

/// Evaluates the candidate strategies by exact closed containment counts and
/// returns the deepest; ties keep the earlier candidate.
pub fn deep_rainbow_point(
    set: &LabeledPointSet,
    options: &DeepPointOptions,
) -> Result<DeepPoint, SelectionError> {
    let total = set.rainbow_count();
    if total > options.budget {
        return Err(SelectionError::Budget {
            what: "rainbow simplices",
            needed: total,
            budget: options.budget,
        });
    }
    if total == 0 {
        return Err(SelectionError::Invariant("a color class is empty".into()));
    }
    let d = set.dim();
    let mut candidates: Vec<(String, Point)> = Vec::new();
    let color_centroids: Vec<Point> = set
        .colors()
        .iter()
        .map(|c| Point::centroid(c.iter()).expect("nonempty color"))
        .collect();
    candidates.push((
        "color-centroid".into(),
        Point::centroid(color_centroids.iter()).expect("d + 1 colors"),
    ));
    let med: Vec<Rational> = (0..d)
        .map(|j| median(set.points().map(|p| p.coords()[j].clone()).collect()))
        .collect();
    candidates.push(("coordinate-median".into(), Point::new(med)));
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for k in 0..options.random_candidates {
        let verts: Vec<&Point> = set
            .colors()
            .iter()
            .map(|c| c.choose(&mut rng).expect("nonempty color"))
            .collect();
        candidates.push((
            format!("random-simplex-centroid-{k}"),
            Point::centroid(verts).expect("d + 1 vertices"),
        ));
    }
    for (k, p) in options.extra_candidates.iter().enumerate() {
        p.check_dim(d)?;
        candidates.push((format!("user-{k}"), p.clone()));
    }

    let rs = RainbowSimplices::from_set(set);
    let mut best: Option<(u64, usize)> = None;
    for (k, (_, p)) in candidates.iter().enumerate() {
        let depth = rs.count(p, Mode::Closed);
        if best.is_none_or(|(b, _)| depth > b) {
            best = Some((depth, k));
        }
    }
    let (depth, k) = best.expect("at least one candidate");
    let (strategy, p) = candidates.swap_remove(k);
    let open_depth = rs.count(&p, Mode::Open);
    Ok(DeepPoint {
        p,
        depth,
        open_depth,
        total: total as u64,
        strategy,
    })
}

impl Default for DeepPoint {
    fn default() -> Self {
        DeepPoint {
            p: Point::new(vec![Rational::zero()]),
            depth: 0,
            open_depth: 0,
            total: 0,
            strategy: String::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn one_dimensional_example() {
        let set = LabeledPointSet::new(
            1,
            true,
            vec![
                vec![Point::from_ints(&[0]), Point::from_ints(&[3])],
                vec![Point::from_ints(&[1]), Point::from_ints(&[2])],
            ],
        )
        .unwrap();
        let p = Point::new(vec![ratio(3, 2)]);
        assert_eq!(rainbow_depth(&set, &p, Mode::Closed), 2);
        // Both centroid strategies land on 3/2: depth k'_1 n^2 = n^2 / 2.
        let opts = DeepPointOptions {
            random_candidates: 0,
            ..Default::default()
        };
        let best = deep_rainbow_point(&set, &opts).unwrap();
        assert_eq!(best.p, p);
        assert_eq!(best.total, 4);
        assert_eq!(best.depth, 2);
        assert_eq!(best.fraction(), 0.5);
        assert_eq!(best.open_depth, 2);
        // Random segment midpoints include 1 and 2, which lie on three
        // closed segments each.
        let best = deep_rainbow_point(&set, &DeepPointOptions::default()).unwrap();
        assert_eq!(best.depth, 3);
    }

    #[test]
    fn single_point_colors() {
        let set = LabeledPointSet::new(
            2,
            true,
            vec![
                vec![Point::from_ints(&[0, 0])],
                vec![Point::from_ints(&[4, 0])],
                vec![Point::from_ints(&[0, 4])],
            ],
        )
        .unwrap();
        let best = deep_rainbow_point(&set, &DeepPointOptions::default()).unwrap();
        assert_eq!(best.total, 1);
        assert!(best.depth <= 1);
        assert_eq!(best.depth, 1);
        assert_eq!(best.open_depth, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let set = LabeledPointSet::new(
            1,
            true,
            vec![
                vec![Point::from_ints(&[0]), Point::from_ints(&[3])],
                vec![Point::from_ints(&[1]), Point::from_ints(&[2])],
            ],
        )
        .unwrap();
        let opts = DeepPointOptions {
            budget: 3,
            ..Default::default()
        };
        assert!(matches!(
            deep_rainbow_point(&set, &opts),
            Err(SelectionError::Budget { .. })
        ));
    }
}
