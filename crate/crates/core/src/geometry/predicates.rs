//! Exact orientation and spanned-hyperplane predicates.
//!
//! A point `x = X/W` enters a determinant as the integer row `(X, W)`. Since
//! every `W > 0`, `sign det[x_i, 1] = sign det[X_i, W_i]`, so signs can be taken
//! on integer matrices. Bareiss elimination runs in checked `i128` first and
//! drops to `BigInt` only on overflow.

use num::{BigInt, Zero};

use super::point::{Homogeneous, OrientedHyperplane, Point, Sign};
use super::GeometryError;
use crate::rational::Rational;

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i8> {
    let n = m.len();
    let mut sign = 1i8;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1].signum() as i8)
}

pub(crate) fn bareiss_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

pub(crate) fn det_sign_rows(rows: &[&Homogeneous]) -> i8 {
    if let Some(small) = rows
        .iter()
        .map(|h| {
            h.small
                .as_ref()
                .map(|r| r.iter().map(|&v| v as i128).collect())
        })
        .collect::<Option<Vec<Vec<i128>>>>()
    {
        if let Some(s) = bareiss_i128(small) {
            return s;
        }
    }
    let big: Vec<Vec<BigInt>> = rows.iter().map(|h| h.row.clone()).collect();
    match bareiss_bigint(big).sign() {
        num::bigint::Sign::Minus => -1,
        num::bigint::Sign::NoSign => 0,
        num::bigint::Sign::Plus => 1,
    }
}

/// Sign of `det [[1, x_0], ..., [1, x_d]] = det [x_1 - x_0, ..., x_d - x_0]`
/// for `d + 1` points of R^d.
pub fn orientation(points: &[&Point]) -> Result<Sign, GeometryError> {
    let d = points
        .first()
        .map(|p| p.dim())
        .ok_or(GeometryError::EmptyInput)?;
    if points.len() != d + 1 {
        return Err(GeometryError::WrongCount {
            what: "points",
            expected: d + 1,
            found: points.len(),
        });
    }
    for p in points {
        p.check_dim(d)?;
    }
    Ok(orientation_unchecked(points))
}

pub(crate) fn orientation_unchecked(points: &[&Point]) -> Sign {
    let rows: Vec<&Homogeneous> = points.iter().map(|p| &p.hom).collect();
    // Rows carry the weight last; moving it first costs (-1)^d.
    let s = det_sign_rows(&rows);
    Sign::from_i8(if points.len().is_multiple_of(2) {
        -s
    } else {
        s
    })
}

/// Convenience form of [`orientation`] for owned slices.
pub fn orientation_of(points: &[Point]) -> Result<Sign, GeometryError> {
    let refs: Vec<&Point> = points.iter().collect();
    orientation(&refs)
}

/// Hyperplane through `d` points of R^d, oriented so that
/// `side(x) == orientation(x, q_1, ..., q_d)`. `None` if the points are
/// affinely dependent.
pub fn spanned_hyperplane(points: &[&Point]) -> Option<OrientedHyperplane> {
    let d = points.len();
    let rows: Vec<&Vec<BigInt>> = points.iter().map(|p| &p.hom.row).collect();
    // Cofactor expansion along the first row [x_1 .. x_d, 1].
    let mut cofactors = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let det = bareiss_bigint(minor);
        // Extra (-1)^d matches the weight-first convention of `orientation`.
        cofactors.push(if (j + d).is_multiple_of(2) { det } else { -det });
    }
    let constant = cofactors.pop().expect("d + 1 cofactors");
    if cofactors.iter().all(Zero::is_zero) {
        return None;
    }
    let gcd = cofactors
        .iter()
        .chain(std::iter::once(&constant))
        .fold(BigInt::zero(), |g, v| num::Integer::gcd(&g, v));
    let normal = cofactors
        .into_iter()
        .map(|a| Rational::from_integer(a / &gcd))
        .collect();
    let offset = Rational::from_integer(-(constant / &gcd));
    OrientedHyperplane::new(normal, offset).ok()
}

/// True iff the points are affinely independent (any count).
pub fn affinely_independent(points: &[&Point]) -> bool {
    let Some(first) = points.first() else {
        return true;
    };
    let d = first.dim();
    if points.len() > d + 1 {
        return false;
    }
    if points.len() == d + 1 {
        return !orientation_unchecked(points).is_zero();
    }
    let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(first)).collect();
    super::linalg::rank(&rows) == points.len() - 1
}
