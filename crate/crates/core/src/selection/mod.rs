//! The selection pipeline and its stages: deep rainbow point, anchor
//! perturbation, weak regularity, few separations, certificates, and the
//! generic-configuration utilities built on strict separation.

pub mod certificate;
pub mod deep;
pub mod few_separations;
pub mod generic;
pub mod ham_sandwich;
pub mod hypergraph;
pub mod perturb;
pub mod pipeline;
pub mod regularity;

use thiserror::Error;

use crate::arrangement::ArrangementError;
use crate::geometry::{GeometryError, PointId};

pub use certificate::{
    verify_certificate, PachCertificate, StageRecord, VerificationMode, VerifyReport,
};
pub use deep::{deep_rainbow_point, rainbow_depth, DeepPoint, DeepPointOptions};
pub use few_separations::{few_separations, Branch, FewSeparations};
pub use generic::{separating_arrangement, shrink_to_generic, GenericPachConfiguration};
pub use ham_sandwich::{ham_sandwich_bisect, HamSandwichCut};
pub use hypergraph::{Radix, RainbowHypergraph, RainbowSimplices};
pub use perturb::perturb_anchor;
pub use pipeline::{run_pipeline, PipelineParams};
pub use regularity::{weak_regularity, RegularityParams, RegularityResult, WitnessReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("{what}: {needed} exceeds budget {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("points not in general position: {witness:?}")]
    NotGeneralPosition { witness: Vec<PointId> },
    #[error("anchor lies in the interior of no rainbow simplex")]
    NoInteriorMargin,
    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(&'static str),
    #[error("density {density} is below the floor {beta}")]
    DensityBelowFloor { density: f64, beta: f64 },
    #[error("color sizes differ: {0:?}")]
    UnequalSizes(Vec<usize>),
    #[error("no spanned hyperplane bisects the sets")]
    NoSpannedCut,
    #[error("dimension {0} is not supported here")]
    Dimension(usize),
    #[error("index {index} out of range for color {color}")]
    InvalidIndex { color: usize, index: usize },
    #[error("p is in the convex hull of the points of the other colors than {color}")]
    SeparationInfeasible { color: usize },
    #[error("condition (G) fails: {0}")]
    ConditionG(String),
    #[error("color {color} would keep {size} points, fewer than {needed}")]
    SizeUnderflow {
        color: usize,
        size: usize,
        needed: usize,
    },
    #[error("p misses the rainbow simplex {witness:?}")]
    NotContained { witness: Vec<PointId> },
    #[error("invariant broken: {0}")]
    Invariant(String),
    #[error("regularity witness search missed a zero-edge tuple after {rounds} rounds")]
    RegularityWitness { rounds: usize },
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<SelectionError>,
    },
}

impl SelectionError {
    pub fn in_stage(self, stage: &'static str) -> SelectionError {
        SelectionError::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, with stage tags removed.
    pub fn root(&self) -> &SelectionError {
        match self {
            SelectionError::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
