//! Generic configurations: point sets in general position together with a
//! point interior to every one of their rainbow simplices.

use serde::{Deserialize, Serialize};

use super::hypergraph::RainbowSimplices;
use super::perturb::{arrangement_preserving_sides, perturb_anchor, SideGuard};
use super::SelectionError;
use crate::arrangement::{Dichotomy, HyperplaneArrangement};
use crate::geometry::position::{condition_g_points, ConditionGRaw};
use crate::geometry::{
    general_position_witness, strict_separation, GeometryError, Mode, Point, PointId, Separation,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericPachConfiguration {
    colors: Vec<Vec<Point>>,
    p: Point,
}

fn ids_of(colors: &[Vec<Point>]) -> Vec<PointId> {
    colors
        .iter()
        .enumerate()
        .flat_map(|(color, c)| (0..c.len()).map(move |index| PointId { color, index }))
        .collect()
}

fn refs(colors: &[Vec<Point>]) -> Vec<Vec<&Point>> {
    colors.iter().map(|c| c.iter().collect()).collect()
}

fn check_shape(colors: &[Vec<Point>], p: &Point) -> Result<(), SelectionError> {
    let d = p.dim();
    if colors.len() != d + 1 {
        return Err(GeometryError::WrongCount {
            what: "colors",
            expected: d + 1,
            found: colors.len(),
        }
        .into());
    }
    for (color, c) in colors.iter().enumerate() {
        if c.is_empty() {
            return Err(SelectionError::SizeUnderflow {
                color,
                size: 0,
                needed: 1,
            });
        }
        for x in c {
            x.check_dim(d)?;
        }
    }
    Ok(())
}

/// First rainbow simplex whose containment bit is false, as point ids.
fn first_miss(rs: &RainbowSimplices, bits: &[bool]) -> Option<Vec<PointId>> {
    bits.iter().position(|&b| !b).map(|idx| {
        rs.radix()
            .decode(idx)
            .into_iter()
            .enumerate()
            .map(|(color, index)| PointId { color, index })
            .collect()
    })
}

impl GenericPachConfiguration {
    /// Validates general position of all points with `p` and open
    /// containment of `p` in every rainbow simplex.
    pub fn new(colors: Vec<Vec<Point>>, p: Point) -> Result<Self, SelectionError> {
        check_shape(&colors, &p)?;
        let ids = ids_of(&colors);
        let mut pts: Vec<&Point> = colors.iter().flatten().collect();
        pts.push(&p);
        if let Some(w) = general_position_witness(&pts) {
            return Err(SelectionError::NotGeneralPosition {
                witness: w.into_iter().filter_map(|i| ids.get(i).copied()).collect(),
            });
        }
        let rs = RainbowSimplices::new(refs(&colors));
        if let Some(witness) = first_miss(&rs, &rs.containment(&p, Mode::Open)) {
            return Err(SelectionError::NotContained { witness });
        }
        Ok(GenericPachConfiguration { colors, p })
    }

    /// Skips validation; for exercising the checks downstream.
    pub fn new_unchecked(colors: Vec<Vec<Point>>, p: Point) -> Self {
        GenericPachConfiguration { colors, p }
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn colors(&self) -> &[Vec<Point>] {
        &self.colors
    }

    pub fn p(&self) -> &Point {
        &self.p
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.colors.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkReport {
    pub config: GenericPachConfiguration,
    /// Indices into the input colors that were kept.
    pub kept: Vec<Vec<usize>>,
    /// The disjoint rainbow simplices with `p'` on their boundary whose
    /// vertices were removed, as indices per color.
    pub removed_simplices: Vec<Vec<usize>>,
}

/// Removes the vertices of a maximal family of pairwise vertex-disjoint
/// rainbow simplices having `p'` on their boundary, then moves `p'` into
/// general position. Under condition (G) at most `d` simplices are removed,
/// so each color loses at most `d` points.
pub fn shrink_to_generic(
    colors: Vec<Vec<Point>>,
    p: &Point,
    seed: u64,
    condition_g_cap: u64,
) -> Result<ShrinkReport, SelectionError> {
    check_shape(&colors, p)?;
    let d = p.dim();
    let ids = ids_of(&colors);
    let pts: Vec<&Point> = colors.iter().flatten().collect();
    match condition_g_points(&pts, d, condition_g_cap) {
        ConditionGRaw::Satisfied | ConditionGRaw::Indeterminate(_) => {}
        ConditionGRaw::NotGp(w) => {
            return Err(SelectionError::NotGeneralPosition {
                witness: w.into_iter().map(|i| ids[i]).collect(),
            })
        }
        ConditionGRaw::Violated(groups) => {
            let groups: Vec<Vec<PointId>> = groups
                .into_iter()
                .map(|g| g.into_iter().map(|i| ids[i]).collect())
                .collect();
            return Err(SelectionError::ConditionG(format!(
                "affine hulls of {groups:?} meet"
            )));
        }
    }
    let rs = RainbowSimplices::new(refs(&colors));
    let closed = rs.containment(p, Mode::Closed);
    if let Some(witness) = first_miss(&rs, &closed) {
        return Err(SelectionError::NotContained { witness });
    }
    let open = rs.containment(p, Mode::Open);
    let mut used: Vec<Vec<bool>> = colors.iter().map(|c| vec![false; c.len()]).collect();
    let mut removed_simplices = Vec::new();
    for idx in 0..rs.len() {
        if open[idx] {
            continue;
        }
        let digits = rs.radix().decode(idx);
        if digits.iter().enumerate().any(|(c, &t)| used[c][t]) {
            continue;
        }
        for (c, &t) in digits.iter().enumerate() {
            used[c][t] = true;
        }
        removed_simplices.push(digits);
    }
    if removed_simplices.len() > d {
        return Err(SelectionError::ConditionG(format!(
            "{} disjoint rainbow simplices have p on their boundary",
            removed_simplices.len()
        )));
    }
    let kept: Vec<Vec<usize>> = used
        .iter()
        .map(|u| (0..u.len()).filter(|&t| !u[t]).collect())
        .collect();
    if let Some(color) = kept.iter().position(Vec::is_empty) {
        // Every color must survive the removal; `d + 1` points always suffice.
        return Err(SelectionError::SizeUnderflow {
            color,
            size: colors[color].len(),
            needed: removed_simplices.len() + 1,
        });
    }
    let remaining: Vec<Vec<Point>> = kept
        .iter()
        .enumerate()
        .map(|(c, ks)| ks.iter().map(|&t| colors[c][t].clone()).collect())
        .collect();
    let rest = RainbowSimplices::new(refs(&remaining));
    if let Some(witness) = first_miss(&rest, &rest.containment(p, Mode::Open)) {
        return Err(SelectionError::Invariant(format!(
            "p is still on the boundary of {witness:?} after removal"
        )));
    }
    let q = perturb_anchor(p, &refs(&remaining), seed)?;
    let config = GenericPachConfiguration::new(remaining, q)?;
    Ok(ShrinkReport {
        config,
        kept,
        removed_simplices,
    })
}

/// For each `i`, a hyperplane strictly separating `p` from the points of all
/// other colors; adjusted into general position and checked to put `p`
/// inside the central simplex.
pub fn separating_arrangement(
    cfg: &GenericPachConfiguration,
    seed: u64,
) -> Result<HyperplaneArrangement, SelectionError> {
    let d = cfg.dim();
    check_shape(cfg.colors(), cfg.p())?;
    let p = cfg.p();
    let mut planes = Vec::with_capacity(d + 1);
    let mut guards = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let others: Vec<&Point> = cfg
            .colors()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, c)| c.iter())
            .collect();
        match strict_separation(p, &others)? {
            Separation::Separated(h) => planes.push(h),
            Separation::Infeasible => {
                return Err(SelectionError::SeparationInfeasible { color: i })
            }
        }
        guards.push(SideGuard {
            negative: vec![p],
            positive: others,
        });
    }
    let arr = arrangement_preserving_sides(planes, &guards, seed)?;
    let ys = refs(cfg.colors());
    match arr.separation_dichotomy(p, &ys)? {
        Dichotomy::Inside => Ok(arr),
        Dichotomy::Outside { .. } => Err(SelectionError::Invariant(
            "a generic configuration produced an outside arrangement".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_CONDITION_G_CAP;
    use crate::rational::ratio;

    fn line(xs: &[i64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::from_ints(&[x])).collect()
    }

    #[test]
    fn interior_anchor_is_kept() {
        let colors = vec![line(&[-5, -3]), line(&[2, 4])];
        let p = Point::new(vec![ratio(1, 3)]);
        let r = shrink_to_generic(colors, &p, 0, DEFAULT_CONDITION_G_CAP).unwrap();
        assert!(r.removed_simplices.is_empty());
        assert_eq!(r.config.p(), &p);
        assert_eq!(r.config.sizes(), vec![2, 2]);
    }

    #[test]
    fn boundary_pair_is_removed_in_one_dimension() {
        let colors = vec![line(&[-2, 0]), line(&[1, 3])];
        let p = Point::from_ints(&[0]);
        let r = shrink_to_generic(colors, &p, 0, DEFAULT_CONDITION_G_CAP).unwrap();
        assert_eq!(r.removed_simplices, vec![vec![1, 0]]);
        assert_eq!(r.kept, vec![vec![0], vec![1]]);
        assert_eq!(r.config.sizes(), vec![1, 1]);
    }

    #[test]
    fn removal_is_bounded_in_the_plane() {
        // p = origin lies on segments between opposite points.
        let c0 = vec![
            Point::from_ints(&[-7, 1]),
            Point::from_ints(&[-6, -5]),
            Point::from_ints(&[-9, 3]),
        ];
        let c1 = vec![
            Point::from_ints(&[7, -1]),
            Point::from_ints(&[5, 8]),
            Point::from_ints(&[8, 3]),
        ];
        let c2 = vec![
            Point::from_ints(&[1, -9]),
            Point::from_ints(&[-2, -8]),
            Point::from_ints(&[3, -7]),
        ];
        let colors = vec![c0, c1, c2];
        let p = Point::from_ints(&[0, 0]);
        let rs = RainbowSimplices::new(refs(&colors));
        if rs.containment(&p, Mode::Closed).iter().all(|&b| b) {
            let r = shrink_to_generic(colors, &p, 0, DEFAULT_CONDITION_G_CAP).unwrap();
            assert!(r.removed_simplices.len() <= 2);
            for (k, s) in r.kept.iter().zip([3, 3, 3]) {
                assert!(k.len() + 2 >= s);
            }
        }
    }

    #[test]
    fn separating_points_in_one_dimension() {
        let cfg = GenericPachConfiguration::new(
            vec![line(&[-5, -3]), line(&[2, 4])],
            Point::new(vec![ratio(1, 3)]),
        )
        .unwrap();
        let arr = separating_arrangement(&cfg, 0).unwrap();
        let v: Vec<f64> = arr.vertices().iter().map(|x| x.to_f64()[0]).collect();
        let (lo, hi) = (v[0].min(v[1]), v[0].max(v[1]));
        assert!(-3.0 < lo && lo < 1.0 / 3.0 && 1.0 / 3.0 < hi && hi < 2.0);
    }

    #[test]
    fn hull_membership_is_reported_by_color() {
        // p is in the hull of colors 1 and 2, so H_0 cannot exist.
        let cfg = GenericPachConfiguration::new_unchecked(
            vec![
                vec![Point::from_ints(&[0, 9])],
                vec![Point::from_ints(&[-4, -1])],
                vec![Point::from_ints(&[4, 1])],
            ],
            Point::from_ints(&[0, 0]),
        );
        assert_eq!(
            separating_arrangement(&cfg, 0),
            Err(SelectionError::SeparationInfeasible { color: 0 })
        );
    }

    #[test]
    fn validation_rejects_boundary_anchor() {
        let err = GenericPachConfiguration::new(
            vec![line(&[-2, 0]), line(&[1, 3])],
            Point::from_ints(&[0]),
        );
        assert!(err.is_err());
    }
}
