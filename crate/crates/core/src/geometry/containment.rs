use num::{One, Zero};

use super::lp::{LinearProgram, Relation};
use super::point::{Point, Sign};
use super::predicates::orientation_unchecked;
use super::GeometryError;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Open,
    Closed,
}

/// Exact convex-hull membership by a feasibility LP on convex weights.
pub fn in_convex_hull(p: &Point, points: &[&Point]) -> bool {
    if points.is_empty() {
        return false;
    }
    let m = points.len();
    let mut lp = LinearProgram::new(m);
    lp.constrain(vec![Rational::one(); m], Relation::Eq, Rational::one());
    for j in 0..p.dim() {
        let coeffs = points.iter().map(|q| q.coords()[j].clone()).collect();
        lp.constrain(coeffs, Relation::Eq, p.coords()[j].clone());
    }
    lp.feasible_point().is_some()
}

/// Signs `O_i` of the simplex with `p` substituted for vertex `i`, plus the
/// sign of the simplex itself.
pub(crate) fn substitution_signs(p: &Point, vertices: &[&Point]) -> (Sign, Vec<Sign>) {
    let base = orientation_unchecked(vertices);
    let mut buf: Vec<&Point> = vertices.to_vec();
    let signs = (0..vertices.len())
        .map(|i| {
            let keep = buf[i];
            buf[i] = p;
            let s = orientation_unchecked(&buf);
            buf[i] = keep;
            s
        })
        .collect();
    (base, signs)
}

pub fn point_in_simplex(p: &Point, vertices: &[&Point], mode: Mode) -> Result<bool, GeometryError> {
    let d = p.dim();
    if vertices.len() != d + 1 {
        return Err(GeometryError::WrongCount {
            what: "simplex vertices",
            expected: d + 1,
            found: vertices.len(),
        });
    }
    for v in vertices {
        v.check_dim(d)?;
    }
    Ok(point_in_simplex_unchecked(p, vertices, mode))
}

pub(crate) fn point_in_simplex_unchecked(p: &Point, vertices: &[&Point], mode: Mode) -> bool {
    let (base, signs) = substitution_signs(p, vertices);
    match (mode, base) {
        (Mode::Open, Sign::Zero) => false,
        (Mode::Open, b) => signs.iter().all(|&s| s == b),
        (Mode::Closed, Sign::Zero) => in_convex_hull(p, vertices),
        (Mode::Closed, b) => signs.iter().all(|&s| s == b || s.is_zero()),
    }
}

/// Barycentric coordinates of `p` in a nondegenerate simplex.
pub fn barycentric(p: &Point, vertices: &[&Point]) -> Option<Vec<Rational>> {
    let d = p.dim();
    let mut a = vec![vec![Rational::zero(); d + 1]; d + 1];
    let mut b = vec![Rational::zero(); d + 1];
    for (j, v) in vertices.iter().enumerate() {
        for r in 0..d {
            a[r][j] = v.coords()[r].clone();
        }
        a[d][j] = Rational::one();
    }
    b[..d].clone_from_slice(p.coords());
    b[d] = Rational::one();
    super::linalg::solve_unique(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn unit_triangle() -> Vec<Point> {
        vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[0, 1]),
        ]
    }

    #[test]
    fn spec_examples() {
        let t = unit_triangle();
        let v: Vec<&Point> = t.iter().collect();
        let centroid = Point::new(vec![ratio(1, 3), ratio(1, 3)]);
        assert!(point_in_simplex(&centroid, &v, Mode::Open).unwrap());
        assert!(!point_in_simplex(&t[1], &v, Mode::Open).unwrap());
        assert!(point_in_simplex(&t[1], &v, Mode::Closed).unwrap());
        let far = Point::from_ints(&[10, 10]);
        assert!(!point_in_simplex(&far, &v, Mode::Closed).unwrap());
    }

    #[test]
    fn degenerate_simplex_uses_hull() {
        let seg = [
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[2, 2]),
            Point::from_ints(&[4, 4]),
        ];
        let v: Vec<&Point> = seg.iter().collect();
        let on = Point::from_ints(&[3, 3]);
        let off = Point::from_ints(&[3, 2]);
        assert!(point_in_simplex(&on, &v, Mode::Closed).unwrap());
        assert!(!point_in_simplex(&on, &v, Mode::Open).unwrap());
        assert!(!point_in_simplex(&off, &v, Mode::Closed).unwrap());
    }

    #[test]
    fn barycentric_recovers_weights() {
        let t = unit_triangle();
        let v: Vec<&Point> = t.iter().collect();
        let p = Point::new(vec![ratio(1, 4), ratio(1, 2)]);
        assert_eq!(
            barycentric(&p, &v).unwrap(),
            vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]
        );
    }
}
