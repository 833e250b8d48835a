//! Exact primitives: points, orientation, containment, separation, and
//! general-position checks.

pub mod containment;
pub mod linalg;
pub mod lp;
pub mod point;
pub mod position;
pub mod predicates;
pub mod separation;

use thiserror::Error;

pub use containment::{barycentric, in_convex_hull, point_in_simplex, Mode};
pub use point::{LabeledPointSet, OrientedHyperplane, Point, PointId, Sign};
pub use position::{
    affine_hulls_meet, for_each_combination, general_position_witness, in_general_position,
    points_in_general_position, satisfies_condition_g, ConditionG, DEFAULT_CONDITION_G_CAP,
};
pub use predicates::{affinely_independent, orientation, orientation_of, spanned_hyperplane};
pub use separation::{separates_strictly, strict_separation, Separation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} {what}, found {found}")]
    WrongCount {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("empty input")]
    EmptyInput,
    #[error("parse error: {0}")]
    Parse(String),
}
