//! Instance generators and the upper-bound audits: grid-in-ball point sets,
//! random instances, discretized measures, and corner-volume checks.

pub mod audit;
pub mod grid;
pub mod instances;
pub mod measure;

use thiserror::Error;

use crate::cones::ConeError;
use crate::geometry::GeometryError;
use crate::selection::SelectionError;

pub use audit::{corner_volume_audit, upper_bound_witness, CornerAudit, UpperBoundReport};
pub use grid::{generate_grid_ball, GridBall, GridBallConfig};
pub use instances::{gaussian_instance, symmetric_instance, uniform_ball_instance};
pub use measure::{discretize_measure, WeightedPointMeasure};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(&'static str),
    #[error("no cube of side {0} meets the open unit ball")]
    NoCubes(f64),
    #[error("point {0} is not strictly inside the unit ball")]
    OutsideBall(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
