//! Arrangements of `d + 1` hyperplanes in general position in R^d.
//!
//! The vertex `h_i` is the common point of all hyperplanes except `H_i`; the
//! bounded cell is the simplex `Δ(H) = conv{h_i}`. After building, every
//! hyperplane is oriented so that `Δ(H)` lies on its negative side, and the
//! corner region `C_i` is the intersection of the positive sides of `H_j`,
//! `j != i`: a simplicial cone with apex `h_i` and rays `h_i - h_j`.

use num::{Signed, Zero};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::geometry::linalg::solve_unique;
use crate::geometry::{
    point_in_simplex, strict_separation, GeometryError, Mode, OrientedHyperplane, Point, PointId,
    Separation,
};
use crate::rational::{small, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrangementError {
    #[error("expected {expected} hyperplanes, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("normals other than H_{omitted} are linearly dependent")]
    DegenerateNormals { omitted: usize },
    #[error("all hyperplanes pass through a common point")]
    Concurrent,
    #[error("p lies on hyperplane H_{0}")]
    PointOnHyperplane(usize),
    #[error("H_{hyperplane} does not strictly separate p from point {point:?}")]
    NotSeparated { hyperplane: usize, point: PointId },
    #[error("corner point {0} is not in its corner region")]
    NotInCorner(usize),
    #[error("p is not in the central simplex")]
    NotInSimplex,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneArrangement {
    dim: usize,
    hyperplanes: Vec<OrientedHyperplane>,
    vertices: Vec<Point>,
}

/// Builds the arrangement and orients each `H_i` so that `Δ(H)` is on its
/// negative side.
pub fn build_arrangement(
    hyperplanes: Vec<OrientedHyperplane>,
) -> Result<HyperplaneArrangement, ArrangementError> {
    let d = hyperplanes.first().map_or(0, OrientedHyperplane::dim);
    if d == 0 || hyperplanes.len() != d + 1 {
        return Err(ArrangementError::WrongCount {
            expected: d + 1,
            found: hyperplanes.len(),
        });
    }
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != d) {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            found: h.dim(),
        }
        .into());
    }
    let mut vertices = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let others: Vec<&OrientedHyperplane> = hyperplanes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, h)| h)
            .collect();
        let a: Vec<Vec<Rational>> = others.iter().map(|h| h.normal().to_vec()).collect();
        let b: Vec<Rational> = others.iter().map(|h| h.offset().clone()).collect();
        let x = solve_unique(&a, &b).ok_or(ArrangementError::DegenerateNormals { omitted: i })?;
        vertices.push(Point::new(x));
    }
    let mut oriented = Vec::with_capacity(d + 1);
    for (i, h) in hyperplanes.into_iter().enumerate() {
        let v = h.eval(&vertices[i]);
        if v.is_zero() {
            return Err(ArrangementError::Concurrent);
        }
        oriented.push(if v.is_positive() { h.flipped() } else { h });
    }
    Ok(HyperplaneArrangement {
        dim: d,
        hyperplanes: oriented,
        vertices,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Dichotomy {
    /// `p ∈ Δ(H)` and every `Y_i` lies in the interior of `C_i`.
    Inside,
    /// A hyperplane strictly separating `p` from all the `Y_i`.
    Outside { witness: OrientedHyperplane },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCounterexample {
    pub arrangement: HyperplaneArrangement,
    pub corner_points: Vec<Point>,
    pub p: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoverVerdict {
    Covered,
    Counterexample(Box<CoverCounterexample>),
}

impl HyperplaneArrangement {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[OrientedHyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &OrientedHyperplane {
        &self.hyperplanes[i]
    }

    /// `h_i`, the vertex of `Δ(H)` opposite to facet `H_i`.
    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Rebuilds from the flipped hyperplanes; orientation must come back
    /// identical.
    pub fn rebuilt(&self) -> Result<HyperplaneArrangement, ArrangementError> {
        build_arrangement(self.hyperplanes.iter().map(|h| h.flipped()).collect())
    }

    /// Membership in `Δ(H)`.
    pub fn in_central_simplex(&self, x: &Point, mode: Mode) -> bool {
        self.hyperplanes.iter().all(|h| {
            let v = h.eval(x);
            match mode {
                Mode::Open => v.is_negative(),
                Mode::Closed => !v.is_positive(),
            }
        })
    }

    /// Membership in the corner region `C_i`.
    pub fn in_corner(&self, i: usize, x: &Point, mode: Mode) -> bool {
        self.hyperplanes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .all(|(_, h)| {
                let v = h.eval(x);
                match mode {
                    Mode::Open => v.is_positive(),
                    Mode::Closed => !v.is_negative(),
                }
            })
    }

    /// Ray directions `h_i - h_j`, `j != i`, of the corner cone at `h_i`.
    pub fn corner_rays(&self, i: usize) -> Vec<Vec<Rational>> {
        (0..=self.dim)
            .filter(|&j| j != i)
            .map(|j| self.vertices[i].sub(&self.vertices[j]))
            .collect()
    }

    /// `h_i + Σ μ_j (h_i - h_j)` with random `μ_j ∈ {0, 1/16, ..., 4}`.
    pub fn random_corner_point<R: Rng>(&self, i: usize, rng: &mut R) -> Point {
        let rays = self.corner_rays(i);
        let mut x = self.vertices[i].coords().to_vec();
        for r in rays {
            let mu = Rational::new(rng.random_range(0..=64i64).into(), 16.into());
            for (xi, ri) in x.iter_mut().zip(&r) {
                *xi += &mu * ri;
            }
        }
        Point::new(x)
    }

    /// Random point of `Δ(H)` from random barycentric weights.
    pub fn random_simplex_point<R: Rng>(&self, rng: &mut R) -> Point {
        let mut raw: Vec<i64> = (0..=self.dim).map(|_| rng.random_range(0..=32)).collect();
        if raw.iter().all(|&w| w == 0) {
            raw = vec![1; self.dim + 1];
        }
        let total: i64 = raw.iter().sum();
        let mut x = vec![Rational::zero(); self.dim];
        for (w, h) in raw.iter().zip(&self.vertices) {
            let lam = Rational::new((*w).into(), total.into());
            for (xi, hi) in x.iter_mut().zip(h.coords()) {
                *xi += &lam * hi;
            }
        }
        Point::new(x)
    }

    /// The separation dichotomy: given that each `H_i` strictly separates `p`
    /// from `∪_{j != i} Y_j`, either `p ∈ Δ(H)` (then `Y_i ⊂ int C_i`) or some
    /// hyperplane strictly separates `p` from `∪ Y_i`.
    pub fn separation_dichotomy(
        &self,
        p: &Point,
        ys: &[Vec<&Point>],
    ) -> Result<Dichotomy, ArrangementError> {
        let d = self.dim;
        if ys.len() != d + 1 {
            return Err(ArrangementError::WrongCount {
                expected: d + 1,
                found: ys.len(),
            });
        }
        p.check_dim(d)?;
        let p_side: Vec<Rational> = self.hyperplanes.iter().map(|h| h.eval(p)).collect();
        if let Some(i) = p_side.iter().position(Zero::is_zero) {
            return Err(ArrangementError::PointOnHyperplane(i));
        }
        for (i, h) in self.hyperplanes.iter().enumerate() {
            for (j, group) in ys.iter().enumerate() {
                if j == i {
                    continue;
                }
                for (k, y) in group.iter().enumerate() {
                    y.check_dim(d)?;
                    let v = h.eval(y);
                    if v.is_zero() || v.is_positive() == p_side[i].is_positive() {
                        return Err(ArrangementError::NotSeparated {
                            hyperplane: i,
                            point: PointId { color: j, index: k },
                        });
                    }
                }
            }
        }
        if p_side.iter().all(Signed::is_negative) {
            for (i, group) in ys.iter().enumerate() {
                if group.iter().any(|y| !self.in_corner(i, y, Mode::Open)) {
                    return Err(ArrangementError::Inconsistent(format!(
                        "p is inside Δ(H) but Y_{i} leaves the interior of C_{i}"
                    )));
                }
            }
            return Ok(Dichotomy::Inside);
        }
        let all: Vec<&Point> = ys.iter().flatten().copied().collect();
        if all.is_empty() {
            let i = p_side
                .iter()
                .position(Signed::is_positive)
                .expect("p outside Δ(H)");
            return Ok(Dichotomy::Outside {
                witness: self.hyperplanes[i].flipped(),
            });
        }
        match strict_separation(p, &all)? {
            Separation::Separated(witness) => Ok(Dichotomy::Outside { witness }),
            Separation::Infeasible => Err(ArrangementError::Inconsistent(
                "p is outside Δ(H) yet in the hull of the Y_i".into(),
            )),
        }
    }

    /// Checks that `p` lies in the simplex spanned by one point from each
    /// corner region (after validating the inputs).
    pub fn corners_cover_simplex(
        &self,
        corner_points: &[Point],
        p: &Point,
    ) -> Result<CoverVerdict, ArrangementError> {
        if corner_points.len() != self.dim + 1 {
            return Err(ArrangementError::WrongCount {
                expected: self.dim + 1,
                found: corner_points.len(),
            });
        }
        for (i, y) in corner_points.iter().enumerate() {
            y.check_dim(self.dim)?;
            if !self.in_corner(i, y, Mode::Closed) {
                return Err(ArrangementError::NotInCorner(i));
            }
        }
        if !self.in_central_simplex(p, Mode::Closed) {
            return Err(ArrangementError::NotInSimplex);
        }
        let refs: Vec<&Point> = corner_points.iter().collect();
        if point_in_simplex(p, &refs, Mode::Closed)? {
            Ok(CoverVerdict::Covered)
        } else {
            Ok(CoverVerdict::Counterexample(Box::new(
                CoverCounterexample {
                    arrangement: self.clone(),
                    corner_points: corner_points.to_vec(),
                    p: p.clone(),
                },
            )))
        }
    }
}

/// Random arrangement with small integer normals and offsets.
pub fn random_arrangement<R: Rng>(d: usize, rng: &mut R) -> HyperplaneArrangement {
    loop {
        let hs: Option<Vec<OrientedHyperplane>> = (0..=d)
            .map(|_| {
                let normal: Vec<Rational> =
                    (0..d).map(|_| small(rng.random_range(-9..=9))).collect();
                OrientedHyperplane::new(normal, small(rng.random_range(-9..=9))).ok()
            })
            .collect();
        if let Some(Ok(arr)) = hs.map(build_arrangement) {
            return arr;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ArrangementDoc {
    dim: usize,
    hyperplanes: Vec<OrientedHyperplane>,
    oriented: bool,
}

impl Serialize for HyperplaneArrangement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ArrangementDoc {
            dim: self.dim,
            hyperplanes: self.hyperplanes.clone(),
            oriented: true,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HyperplaneArrangement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ArrangementDoc::deserialize(d)?;
        let arr = build_arrangement(doc.hyperplanes).map_err(D::Error::custom)?;
        if arr.dim != doc.dim {
            return Err(D::Error::custom("dim does not match hyperplanes"));
        }
        Ok(arr)
    }
}

/// Hyperplane `normal·x = offset` with integer normal.
pub fn hyperplane(normal: &[i64], offset: Rational) -> OrientedHyperplane {
    OrientedHyperplane::new(normal.iter().map(|&v| small(v)).collect(), offset)
        .expect("nonzero normal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line_arrangement() -> HyperplaneArrangement {
        build_arrangement(vec![
            hyperplane(&[1, 0], Rational::zero()),
            hyperplane(&[0, 1], Rational::zero()),
            hyperplane(&[1, 1], Rational::one()),
        ])
        .unwrap()
    }

    #[test]
    fn one_dimensional_arrangement() {
        let arr = build_arrangement(vec![
            hyperplane(&[1], Rational::zero()),
            hyperplane(&[1], Rational::one()),
        ])
        .unwrap();
        assert_eq!(arr.vertex(0), &Point::from_ints(&[1]));
        assert_eq!(arr.vertex(1), &Point::from_ints(&[0]));
        // C_1 (index 0) is the positive side of x = 1 oriented away from Δ.
        assert!(arr.in_corner(0, &Point::from_ints(&[1]), Mode::Closed));
        assert!(arr.in_corner(0, &Point::from_ints(&[5]), Mode::Closed));
        assert!(!arr.in_corner(0, &Point::new(vec![ratio(1, 2)]), Mode::Closed));
        assert!(arr.in_corner(1, &Point::from_ints(&[-3]), Mode::Closed));
    }

    #[test]
    fn planar_arrangement_vertices() {
        let arr = line_arrangement();
        assert_eq!(arr.vertex(0), &Point::from_ints(&[1, 0]));
        assert_eq!(arr.vertex(1), &Point::from_ints(&[0, 1]));
        assert_eq!(arr.vertex(2), &Point::from_ints(&[0, 0]));
        for i in 0..3 {
            assert!(arr.in_corner(i, arr.vertex(i), Mode::Closed));
            for j in 0..3 {
                if j != i {
                    assert!(!arr.in_corner(i, arr.vertex(j), Mode::Closed));
                }
            }
        }
        let centroid = Point::new(vec![ratio(1, 3), ratio(1, 3)]);
        assert!(arr.in_central_simplex(&centroid, Mode::Open));
    }

    #[test]
    fn degenerate_inputs() {
        let parallel = build_arrangement(vec![
            hyperplane(&[1, 0], Rational::zero()),
            hyperplane(&[1, 0], Rational::one()),
            hyperplane(&[0, 1], Rational::one()),
        ]);
        assert!(matches!(
            parallel,
            Err(ArrangementError::DegenerateNormals { .. })
        ));
        let concurrent = build_arrangement(vec![
            hyperplane(&[1, 0], Rational::zero()),
            hyperplane(&[0, 1], Rational::zero()),
            hyperplane(&[1, 1], Rational::zero()),
        ]);
        assert_eq!(concurrent, Err(ArrangementError::Concurrent));
    }

    #[test]
    fn random_vertices_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let arr = random_arrangement(3, &mut rng);
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(arr.hyperplane(j).eval(arr.vertex(i)).is_zero());
                    }
                }
                assert!(arr.hyperplane(i).eval(arr.vertex(i)).is_negative());
            }
            assert_eq!(arr.rebuilt().unwrap(), arr);
        }
    }

    #[test]
    fn dichotomy_inside_one_dimensional() {
        let arr = build_arrangement(vec![
            hyperplane(&[1], Rational::zero()),
            hyperplane(&[1], Rational::one()),
        ])
        .unwrap();
        // Vertex 0 is h = 1 (corner [1, ∞)), vertex 1 is h = 0 (corner (-∞, 0]).
        let p = Point::new(vec![ratio(1, 2)]);
        let y0 = Point::from_ints(&[2]);
        let y1 = Point::from_ints(&[-1]);
        let res = arr
            .separation_dichotomy(&p, &[vec![&y0], vec![&y1]])
            .unwrap();
        assert_eq!(res, Dichotomy::Inside);
    }

    #[test]
    fn dichotomy_outside_gives_checked_witness() {
        let arr = line_arrangement();
        // p beyond the hypotenuse; each Y_j sits on the far side of every
        // H_i with i != j.
        let p = Point::new(vec![ratio(2, 3), ratio(2, 3)]);
        let y = [
            vec![Point::from_ints(&[1, -1])],
            vec![Point::from_ints(&[-1, 1])],
            vec![Point::from_ints(&[-1, -1])],
        ];
        let refs: Vec<Vec<&Point>> = y.iter().map(|g| g.iter().collect()).collect();
        match arr.separation_dichotomy(&p, &refs).unwrap() {
            Dichotomy::Outside { witness } => {
                let all: Vec<&Point> = refs.iter().flatten().copied().collect();
                assert!(crate::geometry::separates_strictly(&witness, &p, &all));
            }
            Dichotomy::Inside => panic!("p is outside Δ"),
        }
    }

    #[test]
    fn dichotomy_precondition_names_hyperplane() {
        let arr = line_arrangement();
        let p = Point::new(vec![ratio(1, 4), ratio(1, 4)]);
        // Y_0 must satisfy y < 0 (H_1) and x + y > 1 (H_2); this one has y > 0.
        let bad = Point::new(vec![ratio(-1, 1), ratio(1, 2)]);
        let good1 = Point::from_ints(&[-1, 3]);
        let good2 = Point::from_ints(&[-1, -1]);
        let err = arr
            .separation_dichotomy(&p, &[vec![&bad], vec![&good1], vec![&good2]])
            .unwrap_err();
        assert_eq!(
            err,
            ArrangementError::NotSeparated {
                hyperplane: 1,
                point: PointId { color: 0, index: 0 }
            }
        );
        let on = Point::new(vec![ratio(0, 1), ratio(1, 2)]);
        assert_eq!(
            arr.separation_dichotomy(&on, &[vec![], vec![], vec![]]),
            Err(ArrangementError::PointOnHyperplane(0))
        );
    }

    #[test]
    fn apices_cover_the_simplex() {
        let arr = line_arrangement();
        let p = Point::new(vec![ratio(1, 5), ratio(2, 5)]);
        let v = arr.vertices().to_vec();
        assert_eq!(
            arr.corners_cover_simplex(&v, &p).unwrap(),
            CoverVerdict::Covered
        );
    }

    #[test]
    fn json_round_trip() {
        let arr = line_arrangement();
        let text = serde_json::to_string(&arr).unwrap();
        assert!(text.contains("\"oriented\":true"));
        let back: HyperplaneArrangement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, arr);
    }
}
