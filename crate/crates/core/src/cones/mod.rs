//! Solid angles, simplicial and polar cones, restricted volumes, and the
//! bound chain relating them. Everything here is `f64` and Monte Carlo.

pub mod acute;
pub mod bounds;
pub mod polar;
pub mod round;
pub mod sampling;
pub mod solid_angle;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use acute::{acute_cone_admissible_deviation, AcuteDeviation};
pub use bounds::{
    ball_volume, msa_upper_bound, rainbow_depth_constant, rho_d_asymptotic, BoundTable,
};
pub use polar::{polar_cone, restricted_volume_mc};
pub use round::{
    blaschke_santalo_audit, round_cone_polar_volume_bound, round_cone_volume_mc, RoundConeBound,
    SantaloAudit,
};
pub use sampling::Estimate;
pub use solid_angle::{
    msa_mc, msa_random_search, normal_fan_cover_check, solid_angle_mc, FanCover, MsaEstimate,
    MsaSearch,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("generators are linearly dependent")]
    SingularGenerators,
    #[error("expected {expected} vectors of length {dim}")]
    Shape { expected: usize, dim: usize },
    #[error("zero samples requested")]
    NoSamples,
    #[error("vertex index {0} out of range")]
    VertexIndex(usize),
    #[error("cone apex is not the origin")]
    ApexNotOrigin,
    #[error("restricted volume {w} outside (0, {max})")]
    VolumeOutOfRange { w: f64, max: f64 },
    #[error("cone is not acute: generators {0} and {1} have nonpositive inner product")]
    NotAcute(usize, usize),
}

/// Relative determinant threshold below which vectors count as dependent.
const SINGULAR_TOL: f64 = 1e-12;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn columns(vectors: &[Vec<f64>]) -> DMatrix<f64> {
    let d = vectors.len();
    DMatrix::from_fn(d, d, |r, c| vectors[c][r])
}

/// `|det| / ∏ ‖v_j‖`, a scale-free measure of independence.
fn relative_det(vectors: &[Vec<f64>]) -> f64 {
    let scale: f64 = vectors.iter().map(|v| norm(v)).product();
    if scale == 0.0 {
        return 0.0;
    }
    columns(vectors).determinant().abs() / scale
}

/// A d-simplex with floating-point vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self, ConeError> {
        let d = vertices.len().saturating_sub(1);
        if d == 0 || vertices.iter().any(|v| v.len() != d) {
            return Err(ConeError::Shape {
                expected: d + 1,
                dim: d,
            });
        }
        let s = Simplex { vertices };
        if relative_det(&s.edges(0)) < SINGULAR_TOL {
            return Err(ConeError::DegenerateSimplex);
        }
        Ok(s)
    }

    pub fn from_points(points: &[crate::geometry::Point]) -> Result<Self, ConeError> {
        Simplex::new(points.iter().map(|p| p.to_f64()).collect())
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Edge vectors `v_j - v_i`, `j != i`, in increasing `j`.
    pub fn edges(&self, i: usize) -> Vec<Vec<f64>> {
        let vi = &self.vertices[i];
        self.vertices
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, vj)| vj.iter().zip(vi).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// The tangent cone at vertex `i`, translated to the origin.
    pub fn vertex_cone(&self, i: usize) -> Result<SimplicialCone, ConeError> {
        if i > self.dim() {
            return Err(ConeError::VertexIndex(i));
        }
        SimplicialCone::at_origin(self.edges(i))
    }

    /// Regular simplex with unit edge length, centred near the origin.
    pub fn regular(d: usize) -> Self {
        // Standard basis of R^(d+1) projected onto the hyperplane sum = 0 and
        // expressed in an orthonormal basis of it via Gram–Schmidt.
        let n = d + 1;
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for k in 0..d {
            let mut v = vec![0.0; n];
            v[k] = 1.0;
            v[k + 1] = -1.0;
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
            let nv = norm(&v);
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let vertices = (0..n)
            .map(|i| basis.iter().map(|b| b[i] * s).collect())
            .collect();
        Simplex::new(vertices).expect("regular simplex is nondegenerate")
    }

    /// Vertices drawn i.i.d. from the standard Gaussian.
    pub fn random<R: Rng>(rng: &mut R, d: usize) -> Self {
        loop {
            let vertices = (0..=d).map(|_| sampling::gaussian(rng, d)).collect();
            if let Ok(s) = Simplex::new(vertices) {
                return s;
            }
        }
    }
}

/// A simplicial cone: apex plus `d` unit generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplicialCone {
    apex: Vec<f64>,
    generators: Vec<Vec<f64>>,
    nondegenerate: bool,
}

impl SimplicialCone {
    /// Normalizes the generators; errors only on a shape mismatch or a zero
    /// generator. Dependence is recorded in `is_nondegenerate`.
    pub fn new(apex: Vec<f64>, generators: Vec<Vec<f64>>) -> Result<Self, ConeError> {
        let d = apex.len();
        if generators.len() != d || generators.iter().any(|g| g.len() != d) {
            return Err(ConeError::Shape {
                expected: d,
                dim: d,
            });
        }
        let mut unit = Vec::with_capacity(d);
        for g in generators {
            let n = norm(&g);
            if n == 0.0 {
                return Err(ConeError::SingularGenerators);
            }
            unit.push(g.into_iter().map(|x| x / n).collect::<Vec<f64>>());
        }
        let nondegenerate = relative_det(&unit) >= SINGULAR_TOL;
        Ok(SimplicialCone {
            apex,
            generators: unit,
            nondegenerate,
        })
    }

    pub fn at_origin(generators: Vec<Vec<f64>>) -> Result<Self, ConeError> {
        let d = generators.len();
        SimplicialCone::new(vec![0.0; d], generators)
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    pub fn apex(&self) -> &[f64] {
        &self.apex
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub(crate) fn require_origin(&self) -> Result<(), ConeError> {
        if self.apex.iter().all(|&x| x == 0.0) {
            Ok(())
        } else {
            Err(ConeError::ApexNotOrigin)
        }
    }

    /// Inverse of the generator matrix; `x` is in the cone iff `M x >= 0`.
    pub fn membership_matrix(&self) -> Result<DMatrix<f64>, ConeError> {
        if !self.nondegenerate {
            return Err(ConeError::SingularGenerators);
        }
        columns(&self.generators)
            .try_inverse()
            .ok_or(ConeError::SingularGenerators)
    }
}

/// Membership test `M x >= 0` for a direction relative to the apex.
pub(crate) fn in_cone(m: &DMatrix<f64>, x: &[f64]) -> bool {
    let d = x.len();
    (0..d).all(|r| (0..d).map(|c| m[(r, c)] * x[c]).sum::<f64>() >= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_simplex_has_unit_edges() {
        for d in 1..6 {
            let s = Simplex::regular(d);
            for i in 0..=d {
                for e in s.edges(i) {
                    assert!((norm(&e) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let flat = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(Simplex::new(flat), Err(ConeError::DegenerateSimplex));
        let c = SimplicialCone::at_origin(vec![vec![1.0, 0.0], vec![-2.0, 0.0]]).unwrap();
        assert!(!c.is_nondegenerate());
        assert!(c.membership_matrix().is_err());
    }

    #[test]
    fn generators_are_normalized() {
        let c = SimplicialCone::at_origin(vec![vec![3.0, 4.0], vec![0.0, 2.0]]).unwrap();
        for g in c.generators() {
            assert!((norm(g) - 1.0).abs() < 1e-12);
        }
    }
}
