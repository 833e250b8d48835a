use proptest::prelude::*;

use pach_core::cones::polar::generator_mismatch;
use pach_core::cones::{polar_cone, solid_angle_mc, Simplex, SimplicialCone};
use pach_core::geometry::{
    in_convex_hull, in_general_position, orientation, point_in_simplex, satisfies_condition_g,
    strict_separation, ConditionG, LabeledPointSet, Mode, Point, Separation, Sign,
    DEFAULT_CONDITION_G_CAP,
};
use pach_core::rational::{ratio, Rational};
use pach_core::selection::{deep_rainbow_point, rainbow_depth, DeepPointOptions};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn point(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(rational(), d).prop_map(Point::new)
}

fn points(d: usize, k: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(d), k)
}

fn dim_and_points(extra: usize) -> impl Strategy<Value = (usize, Vec<Point>)> {
    (1usize..=3).prop_flat_map(move |d| (Just(d), points(d, d + 1 + extra)))
}

fn refs(v: &[Point]) -> Vec<&Point> {
    v.iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn orientation_is_antisymmetric((_, pts) in dim_and_points(0), i in 0usize..4, j in 0usize..4) {
        let n = pts.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let mut swapped = pts.clone();
        swapped.swap(i, j);
        let a = orientation(&refs(&pts)).unwrap();
        let b = orientation(&refs(&swapped)).unwrap();
        prop_assert_eq!(a, b.negate());
    }

    #[test]
    fn orientation_is_translation_invariant(
        (d, pts) in dim_and_points(0),
        shift in prop::collection::vec(rational(), 3),
    ) {
        let moved: Vec<Point> = pts
            .iter()
            .map(|p| Point::new(p.coords().iter().zip(&shift[..d]).map(|(a, b)| a + b).collect()))
            .collect();
        prop_assert_eq!(orientation(&refs(&pts)).unwrap(), orientation(&refs(&moved)).unwrap());
    }

    #[test]
    fn closed_containment_matches_the_hull_lp((_, pts) in dim_and_points(1)) {
        let (p, simplex) = pts.split_last().unwrap();
        prop_assume!(orientation(&refs(simplex)).unwrap() != Sign::Zero);
        prop_assert_eq!(
            point_in_simplex(p, &refs(simplex), Mode::Closed).unwrap(),
            in_convex_hull(p, &refs(simplex))
        );
    }

    #[test]
    fn separation_fails_exactly_on_hull_members(
        (d, pts) in (1usize..=3).prop_flat_map(|d| (Just(d), points(d, 5))),
        inside in any::<bool>(),
        weights in prop::collection::vec(0i64..4, 4),
    ) {
        let (first, set) = pts.split_first().unwrap();
        // Half of the cases put p in the hull on purpose.
        let p = if inside && weights.iter().any(|&w| w > 0) {
            let total: i64 = weights.iter().sum();
            let coords = (0..d)
                .map(|k| {
                    set.iter()
                        .zip(&weights)
                        .map(|(q, &w)| &q.coords()[k] * ratio(w, total))
                        .sum()
                })
                .collect();
            Point::new(coords)
        } else {
            first.clone()
        };
        let member = in_convex_hull(&p, &refs(set));
        match strict_separation(&p, &refs(set)).unwrap() {
            Separation::Infeasible => prop_assert!(member),
            Separation::Separated(h) => {
                prop_assert!(!member);
                prop_assert!(h.eval(&p) < Rational::from_integer(0.into()));
                for q in set {
                    prop_assert!(h.eval(q) > Rational::from_integer(0.into()));
                }
            }
        }
    }

    #[test]
    fn condition_g_implies_general_position(pts in points(2, 7)) {
        let set = LabeledPointSet::new(2, true, vec![pts[..3].to_vec(), pts[3..5].to_vec(), pts[5..].to_vec()]).unwrap();
        let g = satisfies_condition_g(&set, DEFAULT_CONDITION_G_CAP);
        if g == ConditionG::Satisfied {
            prop_assert!(in_general_position(&set));
        }
        if !in_general_position(&set) {
            let is_gp_failure = matches!(g, ConditionG::NotGeneralPosition { .. });
            prop_assert!(is_gp_failure);
        }
    }
}

fn unit_vectors(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_is_an_involution(gens in (2usize..=4).prop_flat_map(unit_vectors)) {
        let Ok(c) = SimplicialCone::at_origin(gens) else { return Ok(()) };
        prop_assume!(c.is_nondegenerate());
        let Ok(back) = polar_cone(&polar_cone(&c).unwrap()) else { return Ok(()) };
        let scale: f64 = c.generators().iter().flatten().map(|x| x.abs()).fold(1.0, f64::max);
        prop_assert!(generator_mismatch(&c, &back) < 1e-6 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn triangle_angles_sum_to_a_half(v in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 3)) {
        let Ok(t) = Simplex::new(v) else { return Ok(()) };
        let sum: f64 = (0..3)
            .map(|i| solid_angle_mc(&t, i, 50_000, i as u64).unwrap().mean)
            .sum();
        prop_assert!((sum - 0.5).abs() < 0.01, "sum {sum}");
    }

    #[test]
    fn depth_survives_reshuffling(
        pts in points(2, 12),
        order in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        colors in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let groups: Vec<Vec<Point>> = pts.chunks(4).map(<[Point]>::to_vec).collect();
        let set = LabeledPointSet::new(2, true, groups.clone()).unwrap();
        let opts = DeepPointOptions { random_candidates: 10, ..DeepPointOptions::default() };
        let deep = deep_rainbow_point(&set, &opts).unwrap();
        let shuffled: Vec<Vec<Point>> = colors
            .iter()
            .map(|&c| order.iter().map(|&t| groups[c][t].clone()).collect())
            .collect();
        let other = LabeledPointSet::new(2, true, shuffled).unwrap();
        prop_assert_eq!(rainbow_depth(&other, &deep.p, Mode::Closed), deep.depth);
        prop_assert_eq!(rainbow_depth(&other, &deep.p, Mode::Open), deep.open_depth);
    }
}
