//! Small exact perturbations: of the anchor point into general position,
//! and of hyperplanes into a general-position arrangement.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::hypergraph::RainbowSimplices;
use super::SelectionError;
use crate::arrangement::{build_arrangement, HyperplaneArrangement};
use crate::geometry::linalg::dot;
use crate::geometry::{
    for_each_combination, general_position_witness, spanned_hyperplane, Mode, OrientedHyperplane,
    Point, PointId,
};
use crate::rational::{small, Rational};

const ANCHOR_RETRIES: usize = 20;
const HYPERPLANE_RETRIES: usize = 50;

/// Largest power of two strictly below `bound`, or 1 for `None`.
pub(crate) fn dyadic_below(bound: Option<&Rational>) -> Rational {
    let mut t = Rational::one();
    if let Some(b) = bound {
        while &t >= b {
            t /= small(2);
        }
    }
    t
}

fn random_vector<R: Rng>(rng: &mut R, d: usize, range: i64) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..d)
            .map(|_| small(rng.random_range(-range..=range)))
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn point_ids(colors: &[Vec<&Point>], flat: &[usize]) -> Vec<PointId> {
    let mut ids = Vec::new();
    for (color, c) in colors.iter().enumerate() {
        for index in 0..c.len() {
            ids.push(PointId { color, index });
        }
    }
    flat.iter().map(|&i| ids[i]).collect()
}

/// Hyperplanes spanned by `d`-subsets of `pts`.
fn spanned_hyperplanes(pts: &[&Point], d: usize) -> Vec<OrientedHyperplane> {
    let mut combos = Vec::new();
    for_each_combination(pts.len(), d, |c| {
        combos.push(c.to_vec());
        true
    });
    combos
        .par_iter()
        .filter_map(|c| {
            let sub: Vec<&Point> = c.iter().map(|&i| pts[i]).collect();
            spanned_hyperplane(&sub)
        })
        .collect()
}

/// Moves `p` off every hyperplane spanned by the points of `colors` while
/// keeping it in the interior of each rainbow simplex that already contains
/// it in its interior. Returns `p` itself when it is already generic.
pub fn perturb_anchor(
    p: &Point,
    colors: &[Vec<&Point>],
    seed: u64,
) -> Result<Point, SelectionError> {
    let d = p.dim();
    let pts: Vec<&Point> = colors.iter().flatten().copied().collect();
    for q in &pts {
        q.check_dim(d)?;
    }
    if let Some(w) = general_position_witness(&pts) {
        return Err(SelectionError::NotGeneralPosition {
            witness: point_ids(colors, &w),
        });
    }
    if pts.len() < d {
        // Too few points to span a hyperplane; only coincidences matter.
        let mut with_p = pts.clone();
        with_p.push(p);
        if general_position_witness(&with_p).is_none() {
            return Ok(p.clone());
        }
    }
    let planes = spanned_hyperplanes(&pts, d);
    let values: Vec<Rational> = planes.par_iter().map(|h| h.eval(p)).collect();
    if values.iter().all(|v| !v.is_zero()) && pts.len() >= d {
        return Ok(p.clone());
    }

    let simplices = RainbowSimplices::new(colors.to_vec());
    let before = simplices.containment(p, Mode::Open);
    if !before.iter().any(|&b| b) {
        return Err(SelectionError::NoInteriorMargin);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ANCHOR_RETRIES {
        let r = random_vector(&mut rng, d, 8);
        let moves: Vec<Rational> = planes.par_iter().map(|h| dot(h.normal(), &r)).collect();
        if values
            .iter()
            .zip(&moves)
            .any(|(v, m)| v.is_zero() && m.is_zero())
        {
            continue;
        }
        let t_max = values
            .iter()
            .zip(&moves)
            .filter(|(v, m)| !v.is_zero() && !m.is_zero())
            .map(|(v, m)| (v / m).abs())
            .min();
        let half = t_max.map(|t| t / small(2));
        let t = dyadic_below(half.as_ref());
        let candidate = p.scaled_shift(&r, &t);
        let generic = planes.par_iter().all(|h| !h.eval(&candidate).is_zero());
        if !generic {
            continue;
        }
        let after = simplices.containment(&candidate, Mode::Open);
        if before.iter().zip(&after).all(|(&b, &a)| !b || a) {
            return Ok(candidate);
        }
    }
    Err(SelectionError::RetriesExhausted("anchor perturbation"))
}

/// Which points must stay strictly on which side of a hyperplane.
pub(crate) struct SideGuard<'a> {
    pub negative: Vec<&'a Point>,
    pub positive: Vec<&'a Point>,
}

/// Builds an arrangement from the hyperplanes, jiggling them by tiny dyadic
/// amounts when they are not in general position. Every guarded point keeps
/// its strict side.
pub(crate) fn arrangement_preserving_sides(
    planes: Vec<OrientedHyperplane>,
    guards: &[SideGuard<'_>],
    seed: u64,
) -> Result<HyperplaneArrangement, SelectionError> {
    let ok = |planes: &[OrientedHyperplane]| {
        planes.iter().zip(guards).all(|(h, g)| {
            g.negative.iter().all(|x| h.eval(x).is_negative())
                && g.positive.iter().all(|x| h.eval(x).is_positive())
        })
    };
    if !ok(&planes) {
        return Err(SelectionError::Invariant(
            "hyperplanes do not separate their guards".into(),
        ));
    }
    if let Ok(arr) = build_arrangement(planes.clone()) {
        return Ok(arr);
    }
    let d = planes[0].dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..HYPERPLANE_RETRIES {
        let mut moved = Vec::with_capacity(planes.len());
        for (h, g) in planes.iter().zip(guards) {
            let dn = random_vector(&mut rng, d, 4);
            let doff = small(rng.random_range(-4..=4));
            // f changes by eta·(dn·x - doff) at x.
            let bound = g
                .negative
                .iter()
                .chain(&g.positive)
                .filter_map(|x| {
                    let change = (dot(&dn, x.coords()) - &doff).abs();
                    (!change.is_zero()).then(|| h.eval(x).abs() / change)
                })
                .min();
            let eta = dyadic_below(bound.map(|b| b / small(2)).as_ref());
            let normal: Vec<Rational> = h
                .normal()
                .iter()
                .zip(&dn)
                .map(|(a, b)| a + &eta * b)
                .collect();
            let offset = h.offset() + &eta * &doff;
            match OrientedHyperplane::new(normal, offset) {
                Ok(m) => moved.push(m),
                Err(_) => break,
            }
        }
        if moved.len() != planes.len() || !ok(&moved) {
            continue;
        }
        if let Ok(arr) = build_arrangement(moved) {
            return Ok(arr);
        }
    }
    Err(SelectionError::RetriesExhausted("hyperplane perturbation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_in_simplex;
    use crate::rational::ratio;

    fn pts(coords: &[[i64; 2]]) -> Vec<Point> {
        coords.iter().map(|c| Point::from_ints(c)).collect()
    }

    #[test]
    fn generic_anchor_is_unchanged() {
        let colors = [
            pts(&[[0, 0], [1, -3]]),
            pts(&[[8, 0], [9, 2]]),
            pts(&[[0, 8], [-1, 10]]),
        ];
        let refs: Vec<Vec<&Point>> = colors.iter().map(|c| c.iter().collect()).collect();
        let p = Point::new(vec![ratio(5, 2), ratio(7, 3)]);
        assert_eq!(perturb_anchor(&p, &refs, 1).unwrap(), p);
    }

    #[test]
    fn anchor_on_spanned_line_moves_off_it() {
        // p = (2, 2) lies on the line through (0,0) and (4,4) but is interior
        // to the big triangle.
        let colors = [pts(&[[0, 0]]), pts(&[[9, 1]]), pts(&[[1, 9], [4, 4]])];
        let refs: Vec<Vec<&Point>> = colors.iter().map(|c| c.iter().collect()).collect();
        let p = Point::from_ints(&[2, 2]);
        let q = perturb_anchor(&p, &refs, 7).unwrap();
        assert_ne!(q, p);
        let big = [&colors[0][0], &colors[1][0], &colors[2][0]];
        assert!(point_in_simplex(&q, &big, Mode::Open).unwrap());
        let mut all: Vec<&Point> = refs.iter().flatten().copied().collect();
        all.push(&q);
        assert!(general_position_witness(&all).is_none());
        // The shift stays below half the smallest nonzero facet distance.
        let line = spanned_hyperplane(&[&colors[0][0], &colors[1][0]]).unwrap();
        assert!((line.eval(&q) - line.eval(&p)).abs() * small(2) < line.eval(&p).abs());
    }

    #[test]
    fn anchor_on_facet_has_no_margin() {
        let colors = [pts(&[[0, 0]]), pts(&[[4, 0]]), pts(&[[0, 4]])];
        let refs: Vec<Vec<&Point>> = colors.iter().map(|c| c.iter().collect()).collect();
        let p = Point::from_ints(&[2, 0]);
        assert_eq!(
            perturb_anchor(&p, &refs, 0),
            Err(SelectionError::NoInteriorMargin)
        );
    }

    #[test]
    fn dyadic_bounds() {
        assert_eq!(dyadic_below(None), Rational::one());
        assert_eq!(dyadic_below(Some(&ratio(1, 3))), ratio(1, 4));
        assert_eq!(dyadic_below(Some(&ratio(1, 4))), ratio(1, 8));
    }

    #[test]
    fn concurrent_lines_are_separated_into_an_arrangement() {
        // Three lines through the origin, each with p on one side and a
        // guard point on the other.
        let planes = vec![
            OrientedHyperplane::new(vec![small(1), small(0)], small(0)).unwrap(),
            OrientedHyperplane::new(vec![small(0), small(1)], small(0)).unwrap(),
            OrientedHyperplane::new(vec![small(1), small(1)], small(0)).unwrap(),
        ];
        let p = Point::new(vec![ratio(-1, 3), ratio(-1, 5)]);
        let g = [
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
            Point::from_ints(&[1, 1]),
        ];
        let guards: Vec<SideGuard> = g
            .iter()
            .map(|x| SideGuard {
                negative: vec![&p],
                positive: vec![x],
            })
            .collect();
        assert!(build_arrangement(planes.clone()).is_err());
        let arr = arrangement_preserving_sides(planes, &guards, 3).unwrap();
        for (i, h) in arr.hyperplanes().iter().enumerate() {
            assert_ne!(h.side(&p), h.side(&g[i]));
        }
    }
}
