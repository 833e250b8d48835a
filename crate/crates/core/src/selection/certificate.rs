//! Selection certificates and their independent verification.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::hypergraph::RainbowSimplices;
use crate::arrangement::{Dichotomy, HyperplaneArrangement};
use crate::geometry::{LabeledPointSet, Mode, Point, PointId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationMode {
    /// Closed containment of `p` in every rainbow simplex of the `Y_i`.
    Exhaustive,
    /// Only the separation preconditions and the inside branch.
    Arrangement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub summary: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PachCertificate {
    /// SHA-256 of the input set's canonical JSON.
    pub input_hash: String,
    pub p: Point,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<usize>>,
    pub arrangement: HyperplaneArrangement,
    /// `|Y_i| / |X_i|`.
    pub fractions: Vec<f64>,
    pub verified: VerificationMode,
    pub seed: u64,
    pub stages: Vec<StageRecord>,
}

impl PachCertificate {
    pub fn min_fraction(&self) -> f64 {
        self.fractions.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn input_hash(set: &LabeledPointSet) -> String {
    let json = serde_json::to_vec(set).expect("point sets serialize");
    hex::encode(Sha256::digest(&json))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: VerificationMode,
    pub passed: bool,
    /// Exhaustive mode only.
    pub contained: Option<u64>,
    pub total: Option<u64>,
    pub fraction: Option<f64>,
    /// A rainbow simplex missing `p`, or the offending points.
    pub witness: Option<Vec<PointId>>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    fn failed(mode: VerificationMode, warning: String) -> Self {
        VerifyReport {
            mode,
            passed: false,
            contained: None,
            total: None,
            fraction: None,
            witness: None,
            warnings: vec![warning],
        }
    }
}

/// Checks a certificate against the input set. Never fails: problems are
/// reported in the verdict.
pub fn verify_certificate(
    set: &LabeledPointSet,
    cert: &PachCertificate,
    mode: VerificationMode,
) -> VerifyReport {
    let d = set.dim();
    if cert.y.len() != d + 1 {
        return VerifyReport::failed(
            mode,
            format!("expected {} index sets, found {}", d + 1, cert.y.len()),
        );
    }
    if cert.p.dim() != d {
        return VerifyReport::failed(mode, format!("p has dimension {}", cert.p.dim()));
    }
    for (color, part) in cert.y.iter().enumerate() {
        if let Some(&index) = part.iter().find(|&&t| t >= set.color(color).len()) {
            return VerifyReport::failed(
                mode,
                format!("index {index} out of range for color {color}"),
            );
        }
    }
    let mut warnings = Vec::new();
    if cert.input_hash != input_hash(set) {
        warnings.push("input hash does not match the point set".to_string());
    }
    let ys: Vec<Vec<&Point>> = cert
        .y
        .iter()
        .enumerate()
        .map(|(i, part)| part.iter().map(|&t| &set.color(i)[t]).collect())
        .collect();
    if let Some(i) = ys.iter().position(Vec::is_empty) {
        warnings.push(format!("Y_{i} is empty; containment holds vacuously"));
        return VerifyReport {
            mode,
            passed: true,
            contained: (mode == VerificationMode::Exhaustive).then_some(0),
            total: (mode == VerificationMode::Exhaustive).then_some(0),
            fraction: (mode == VerificationMode::Exhaustive).then_some(1.0),
            witness: None,
            warnings,
        };
    }
    match mode {
        VerificationMode::Exhaustive => {
            let rs = RainbowSimplices::new(ys);
            let bits = rs.containment(&cert.p, Mode::Closed);
            let contained = bits.iter().filter(|&&b| b).count() as u64;
            let total = bits.len() as u64;
            let witness = bits.iter().position(|&b| !b).map(|idx| {
                rs.radix()
                    .decode(idx)
                    .into_iter()
                    .enumerate()
                    .map(|(color, t)| PointId {
                        color,
                        index: cert.y[color][t],
                    })
                    .collect()
            });
            VerifyReport {
                mode,
                passed: contained == total,
                contained: Some(contained),
                total: Some(total),
                fraction: Some(contained as f64 / total as f64),
                witness,
                warnings,
            }
        }
        VerificationMode::Arrangement => {
            let (passed, witness) = match cert.arrangement.separation_dichotomy(&cert.p, &ys) {
                Ok(Dichotomy::Inside) => (true, None),
                Ok(Dichotomy::Outside { .. }) => {
                    warnings.push("p lies outside the central simplex".into());
                    (false, None)
                }
                Err(crate::arrangement::ArrangementError::NotSeparated { hyperplane, point }) => {
                    warnings.push(format!(
                        "hyperplane {hyperplane} does not separate p from a point of color {}",
                        point.color
                    ));
                    let id = PointId {
                        color: point.color,
                        index: cert.y[point.color][point.index],
                    };
                    (false, Some(vec![id]))
                }
                Err(e) => {
                    warnings.push(e.to_string());
                    (false, None)
                }
            };
            VerifyReport {
                mode,
                passed,
                contained: None,
                total: None,
                fraction: None,
                witness,
                warnings,
            }
        }
    }
}
