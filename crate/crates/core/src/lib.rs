//! Certificate-producing algorithms around Pach's selection theorem.
//!
//! Given `d + 1` colored point sets in R^d, the selection pipeline finds a
//! point `p` and large subsets `Y_i` such that every rainbow simplex of the
//! `Y_i` contains `p`, together with a hyperplane arrangement that certifies
//! it. Alongside sit Monte Carlo audits of solid angles, polar cones and
//! corner-region volumes.
//!
//! Combinatorial decisions use exact rationals ([`rational::Rational`]);
//! volumes and angles use `f64`.

pub mod arrangement;
pub mod cones;
pub mod constructions;
pub mod geometry;
pub mod rational;
pub mod selection;

pub use geometry::{LabeledPointSet, OrientedHyperplane, Point, PointId, Sign};
pub use rational::Rational;
