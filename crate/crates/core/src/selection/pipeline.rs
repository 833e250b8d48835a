//! The full selection pipeline: deep point, anchor perturbation, rainbow
//! hypergraph, weak regularity, few separations, verification.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::certificate::{
    input_hash, verify_certificate, PachCertificate, StageRecord, VerificationMode,
};
use super::deep::{deep_rainbow_point, DeepPointOptions};
use super::few_separations::{few_separations, Branch};
use super::hypergraph::RainbowHypergraph;
use super::perturb::perturb_anchor;
use super::regularity::{continue_regularity, weak_regularity, RegularityParams, WitnessReport};
use super::SelectionError;
use crate::cones::sampling::sub_seed;
use crate::geometry::{general_position_witness, LabeledPointSet, Point, PointId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub seed: u64,
    /// Defaults to `2^-d`.
    pub epsilon: Option<f64>,
    pub witness_budget: u128,
    pub witness_trials: usize,
    /// Cap on the number of rainbow simplices enumerated.
    pub rainbow_budget: u128,
    /// Deep-point candidates beyond the built-in strategies.
    pub extra_candidates: Vec<Point>,
    /// How many empty tuples found by the separation stage are fed back.
    pub max_feedback_rounds: usize,
    /// Run the exhaustive containment check before returning.
    pub verify: bool,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            seed: 0,
            epsilon: None,
            witness_budget: 1_000_000,
            witness_trials: 2000,
            rainbow_budget: 10_000_000,
            extra_candidates: Vec::new(),
            max_feedback_rounds: 64,
            verify: true,
        }
    }
}

fn validate(set: &LabeledPointSet) -> Result<usize, SelectionError> {
    let sizes = set.color_sizes();
    if sizes.iter().any(|&n| n != sizes[0]) || sizes[0] == 0 {
        return Err(SelectionError::UnequalSizes(sizes));
    }
    let ids: Vec<PointId> = set.ids().collect();
    let pts: Vec<&Point> = set.points().collect();
    if let Some(w) = general_position_witness(&pts) {
        return Err(SelectionError::NotGeneralPosition {
            witness: w.into_iter().map(|i| ids[i]).collect(),
        });
    }
    Ok(sizes[0])
}

/// Runs every stage and returns a certificate on the all-contain branch.
/// Errors carry the name of the failing stage.
pub fn run_pipeline(
    set: &LabeledPointSet,
    params: &PipelineParams,
) -> Result<PachCertificate, SelectionError> {
    let d = set.dim();
    let mut stages = Vec::new();
    let n = validate(set).map_err(|e| e.in_stage("validate"))?;
    stages.push(StageRecord {
        stage: "validate".into(),
        summary: json!({ "dim": d, "n": n }),
    });

    let deep = deep_rainbow_point(
        set,
        &DeepPointOptions {
            seed: sub_seed(params.seed, 1),
            random_candidates: 200,
            extra_candidates: params.extra_candidates.clone(),
            budget: params.rainbow_budget,
        },
    )
    .map_err(|e| e.in_stage("deep_point"))?;
    stages.push(StageRecord {
        stage: "deep_point".into(),
        summary: json!({
            "p": deep.p,
            "depth": deep.depth,
            "open_depth": deep.open_depth,
            "total": deep.total,
            "fraction": deep.fraction(),
            "strategy": deep.strategy,
        }),
    });

    let colors: Vec<Vec<&Point>> = set.colors().iter().map(|c| c.iter().collect()).collect();
    let p = perturb_anchor(&deep.p, &colors, sub_seed(params.seed, 2))
        .map_err(|e| e.in_stage("perturb"))?;
    stages.push(StageRecord {
        stage: "perturb".into(),
        summary: json!({ "p": p, "moved": p != deep.p }),
    });

    let full: Vec<Vec<usize>> = (0..=d).map(|_| (0..n).collect()).collect();
    let h = RainbowHypergraph::build(set, full, &p);
    stages.push(StageRecord {
        stage: "hypergraph".into(),
        summary: json!({ "edges": h.edge_count(), "density": h.density() }),
    });

    let epsilon = params.epsilon.unwrap_or_else(|| 0.5f64.powi(d as i32));
    let reg_params = RegularityParams {
        epsilon,
        beta: h.density(),
        witness_budget: params.witness_budget,
        trials: params.witness_trials,
        seed: sub_seed(params.seed, 3),
    };
    let mut reg = weak_regularity(&h, &reg_params).map_err(|e| e.in_stage("regularity"))?;

    let mut feedback = 0;
    let sep = loop {
        let sep = few_separations(
            set,
            &reg.parts,
            &p,
            sub_seed(params.seed, 4 + feedback as u64),
        )
        .map_err(|e| e.in_stage("few_separations"))?;
        if sep.branch == Branch::AllContain {
            break sep;
        }
        if reg.report == WitnessReport::ExhaustiveClean {
            return Err(SelectionError::Invariant(
                "separation found an empty tuple that exhaustive search ruled out".into(),
            )
            .in_stage("few_separations"));
        }
        if feedback == params.max_feedback_rounds {
            return Err(
                SelectionError::RegularityWitness { rounds: feedback }.in_stage("few_separations")
            );
        }
        if sep.y.iter().any(|y| y.len() < reg.m) {
            return Err(SelectionError::Invariant(format!(
                "separation kept fewer than {} points per color",
                reg.m
            ))
            .in_stage("few_separations"));
        }
        let witness: Vec<Vec<usize>> = sep.y.iter().map(|y| y[..reg.m].to_vec()).collect();
        reg = continue_regularity(&h, &reg_params, &reg, &witness)
            .map_err(|e| e.in_stage("regularity"))?;
        feedback += 1;
    };
    stages.push(StageRecord {
        stage: "regularity".into(),
        summary: json!({
            "epsilon": epsilon,
            "beta": reg_params.beta,
            "s": reg.s,
            "m": reg.m,
            "density": reg.density,
            "report": reg.report,
            "restrictions": reg.steps.len(),
            "asymptotic_size_floor": reg.asymptotic_size_floor,
        }),
    });
    stages.push(StageRecord {
        stage: "few_separations".into(),
        summary: json!({
            "branch": sep.branch,
            "sizes": sep.y.iter().map(Vec::len).collect::<Vec<_>>(),
            "feedback_rounds": feedback,
        }),
    });

    let mut cert = PachCertificate {
        input_hash: input_hash(set),
        p,
        fractions: sep.y.iter().map(|y| y.len() as f64 / n as f64).collect(),
        y: sep.y,
        arrangement: sep.arrangement,
        verified: VerificationMode::Arrangement,
        seed: params.seed,
        stages,
    };
    let arrangement_check = verify_certificate(set, &cert, VerificationMode::Arrangement);
    if !arrangement_check.passed {
        return Err(
            SelectionError::Invariant(arrangement_check.warnings.join("; ")).in_stage("verify"),
        );
    }
    if params.verify {
        let report = verify_certificate(set, &cert, VerificationMode::Exhaustive);
        if !report.passed {
            return Err(SelectionError::NotContained {
                witness: report.witness.unwrap_or_default(),
            }
            .in_stage("verify"));
        }
        cert.verified = VerificationMode::Exhaustive;
        cert.stages.push(StageRecord {
            stage: "verify".into(),
            summary: json!({ "contained": report.contained, "total": report.total }),
        });
    }
    Ok(cert)
}
