use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::GeometryError;
use crate::rational::{self, format_rational, parse_rational, to_f64, Rational};

/// Integer homogeneous coordinates `(X_1, ..., X_d, W)` with `W > 0` and
/// `x_j = X_j / W`. Determinant signs are computed on these rows.
#[derive(Clone, Debug)]
pub(crate) struct Homogeneous {
    pub(crate) row: Vec<BigInt>,
    /// Same row when every entry fits in an `i64`.
    pub(crate) small: Option<Vec<i64>>,
}

impl Homogeneous {
    fn from_coords(coords: &[Rational]) -> Self {
        let weight = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut row: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&weight / c.denom()))
            .collect();
        row.push(weight);
        let small = row.iter().map(|v| v.to_i64()).collect::<Option<Vec<_>>>();
        Homogeneous { row, small }
    }
}

/// A point of R^d with exact rational coordinates.
#[derive(Clone)]
pub struct Point {
    coords: Vec<Rational>,
    pub(crate) hom: Homogeneous,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        let hom = Homogeneous::from_coords(&coords);
        Point { coords, hom }
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self, GeometryError> {
        let exact = coords
            .iter()
            .map(|&x| rational::from_f64(x).map_err(|e| GeometryError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Point::new(exact))
    }

    /// Integer coordinates, mostly for tests and examples.
    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| rational::small(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn scaled_shift(&self, direction: &[Rational], t: &Rational) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(direction)
                .map(|(a, r)| a + r * t)
                .collect(),
        )
    }

    pub fn centroid<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Point> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut sum = first.coords.clone();
        let mut count = 1i64;
        for p in iter {
            for (s, c) in sum.iter_mut().zip(&p.coords) {
                *s += c;
            }
            count += 1;
        }
        let k = rational::small(count);
        Some(Point::new(sum.into_iter().map(|s| s / &k).collect()))
    }

    pub fn squared_distance(&self, other: &Point) -> Rational {
        self.sub(other).iter().map(|d| d * d).sum()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<(), GeometryError> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Point {}

impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational::serde_rational_vec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let values = Vec::<Value>::deserialize(d)?;
        let coords = values
            .iter()
            .map(scalar_from_json)
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Point::new(coords))
    }
}

/// Accepts either a `"p/q"` string or a JSON number (converted exactly).
pub(crate) fn scalar_from_json(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rational::small(i))
            } else {
                let x = n.as_f64().ok_or_else(|| format!("bad number {n}"))?;
                rational::from_f64(x).map_err(|e| e.to_string())
            }
        }
        other => Err(format!("expected number or rational string, got {other}")),
    }
}

/// Stable identifier of a point: its color and its index within that color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointId {
    pub color: usize,
    pub index: usize,
}

/// `d + 1` colored point lists in R^d.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPointSet {
    dim: usize,
    exact: bool,
    colors: Vec<Vec<Point>>,
}

impl LabeledPointSet {
    pub fn new(dim: usize, exact: bool, colors: Vec<Vec<Point>>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if colors.len() != dim + 1 {
            return Err(GeometryError::WrongCount {
                what: "colors",
                expected: dim + 1,
                found: colors.len(),
            });
        }
        for p in colors.iter().flatten() {
            p.check_dim(dim)?;
        }
        Ok(LabeledPointSet { dim, exact, colors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn colors(&self) -> &[Vec<Point>] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> &[Point] {
        &self.colors[i]
    }

    pub fn color_sizes(&self) -> Vec<usize> {
        self.colors.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.colors.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, id: PointId) -> &Point {
        &self.colors[id.color][id.index]
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        self.colors
            .iter()
            .enumerate()
            .flat_map(|(color, pts)| (0..pts.len()).map(move |index| PointId { color, index }))
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> + '_ {
        self.colors.iter().flatten()
    }

    /// Product of the color sizes, i.e. the number of rainbow simplices.
    pub fn rainbow_count(&self) -> u128 {
        self.colors.iter().map(|c| c.len() as u128).product()
    }

    pub fn with_exact_flag(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn into_colors(self) -> Vec<Vec<Point>> {
        self.colors
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetDoc {
    dim: usize,
    exact: bool,
    colors: Vec<Vec<Vec<Value>>>,
}

impl Serialize for LabeledPointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let colors = self
            .colors
            .iter()
            .map(|pts| {
                pts.iter()
                    .map(|p| {
                        p.coords
                            .iter()
                            .map(|c| {
                                if self.exact {
                                    Value::String(format_rational(c))
                                } else {
                                    serde_json::Number::from_f64(to_f64(c))
                                        .map(Value::Number)
                                        .unwrap_or(Value::Null)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        PointSetDoc {
            dim: self.dim,
            exact: self.exact,
            colors,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledPointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = PointSetDoc::deserialize(d)?;
        let colors = doc
            .colors
            .iter()
            .map(|pts| {
                pts.iter()
                    .map(|coords| {
                        coords
                            .iter()
                            .map(scalar_from_json)
                            .collect::<Result<Vec<_>, _>>()
                            .map(Point::new)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        LabeledPointSet::new(doc.dim, doc.exact, colors).map_err(D::Error::custom)
    }
}

/// Oriented hyperplane `{x : normal·x = offset}`; `x` is on the positive side
/// iff `normal·x > offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedHyperplane {
    #[serde(with = "crate::rational::serde_rational_vec")]
    normal: Vec<Rational>,
    #[serde(with = "crate::rational::serde_rational")]
    offset: Rational,
}

impl OrientedHyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self, GeometryError> {
        if normal.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        if normal.iter().all(Zero::is_zero) {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(OrientedHyperplane { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// `normal·x − offset`.
    pub fn eval(&self, x: &Point) -> Rational {
        self.eval_coords(x.coords())
    }

    pub fn eval_coords(&self, x: &[Rational]) -> Rational {
        let dot: Rational = self.normal.iter().zip(x).map(|(a, b)| a * b).sum();
        dot - &self.offset
    }

    pub fn side(&self, x: &Point) -> Sign {
        Sign::of(&self.eval(x))
    }

    pub fn flipped(&self) -> Self {
        OrientedHyperplane {
            normal: self.normal.iter().map(|a| -a).collect(),
            offset: -&self.offset,
        }
    }

    /// Scales normal and offset so that the largest normal entry has magnitude 1.
    pub fn normalized(&self) -> Self {
        let scale = self
            .normal
            .iter()
            .map(|a| a.abs())
            .max()
            .expect("nonempty normal");
        OrientedHyperplane {
            normal: self.normal.iter().map(|a| a / &scale).collect(),
            offset: &self.offset / &scale,
        }
    }
}

/// Sign of a determinant or of an affine functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: &Rational) -> Sign {
        Sign::from_i8(rational::sign_of(value))
    }

    pub fn from_i8(s: i8) -> Sign {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn negate(self) -> Sign {
        Sign::from_i8(-self.as_i8())
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}
