use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use pach_core::cones::{msa_mc, solid_angle_mc, BoundTable, Simplex};
use pach_core::constructions::{
    discretize_measure, gaussian_instance, generate_grid_ball, symmetric_instance,
    uniform_ball_instance, GridBallConfig, WeightedPointMeasure,
};
use pach_core::geometry::LabeledPointSet;
use pach_core::rational::parse_rational;
use pach_core::selection::certificate::input_hash;
use pach_core::selection::{
    deep_rainbow_point, run_pipeline, verify_certificate, DeepPointOptions, PachCertificate,
    PipelineParams, VerificationMode, VerifyReport,
};

use crate::record::ExperimentRecord;
use crate::replicate::Replication;
use crate::{AngleArgs, BoundsArgs, CliError, DeepArgs, GenArgs, SelectArgs, Shape, VerifyArgs};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

/// Writes to the file, or to stdout without a path.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
            }
            fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn generate(
    dim: usize,
    shape: Shape,
    eps: f64,
    n: usize,
    seed: u64,
) -> Result<LabeledPointSet, CliError> {
    Ok(match shape {
        Shape::GridBall => generate_grid_ball(&GridBallConfig::new(dim, eps, seed))?.set,
        Shape::UniformBall => uniform_ball_instance(dim, n, seed)?,
        Shape::Gaussian => gaussian_instance(dim, n, seed)?,
        Shape::Symmetric => symmetric_instance(dim, n, seed)?,
        Shape::MeasureFile => {
            return Err(CliError::Input("measure files need --measure".into()));
        }
    })
}

pub fn gen(a: &GenArgs) -> Result<(), CliError> {
    let set = match (a.shape, &a.measure) {
        (Shape::MeasureFile, Some(path)) => {
            let measures: Vec<WeightedPointMeasure> = read_json(path)?;
            if measures.len() != a.dim + 1 {
                return Err(CliError::Precondition(format!(
                    "{} measures for dimension {}",
                    measures.len(),
                    a.dim
                )));
            }
            let spread = parse_rational(&a.spread).map_err(|e| CliError::Input(e.to_string()))?;
            discretize_measure(&measures, &spread, a.seed)?
        }
        (shape, _) => generate(a.dim, shape, a.eps, a.n, a.seed)?,
    };
    emit(a.out.as_ref(), &to_json(&set))
}

pub fn pipeline_params(a: &SelectArgs) -> PipelineParams {
    PipelineParams {
        seed: a.seed,
        epsilon: a.epsilon,
        witness_budget: a.witness_budget,
        witness_trials: a.witness_trials,
        rainbow_budget: a.rainbow_budget,
        verify: !a.no_verify,
        ..PipelineParams::default()
    }
}

/// The pipeline on equal-size copies, mapped back to the original indices,
/// with the exhaustive check against the original set unless disabled.
pub fn select_set(
    set: &LabeledPointSet,
    params: &PipelineParams,
) -> Result<(PachCertificate, Option<VerifyReport>), CliError> {
    let rep = Replication::new(set, params.seed)?;
    let mut cert = run_pipeline(rep.set(), params)?;
    if !rep.is_identity() {
        cert = rep.map_back(cert);
        cert.input_hash = input_hash(set);
        cert.verified = VerificationMode::Arrangement;
    }
    if !params.verify {
        return Ok((cert, None));
    }
    let report = verify_certificate(set, &cert, VerificationMode::Exhaustive);
    if report.passed {
        cert.verified = VerificationMode::Exhaustive;
    }
    Ok((cert, Some(report)))
}

pub fn select(a: &SelectArgs) -> Result<(), CliError> {
    let started = std::time::Instant::now();
    let set: LabeledPointSet = read_json(&a.input)?;
    let params = pipeline_params(a);
    let (cert, report) = select_set(&set, &params)?;
    emit(a.out.as_ref(), &to_json(&cert))?;
    if let Some(path) = &a.record {
        let rec = ExperimentRecord::new(
            "select",
            serde_json::to_value(a).expect("arguments serialize"),
            vec![a.seed],
            cert.input_hash.clone(),
            serde_json::json!({ "certificate": &cert, "verification": &report }),
            started.elapsed(),
        );
        emit(Some(path), &to_json(&rec))?;
    }
    match report {
        Some(r) if !r.passed => Err(CliError::Verification(format!(
            "containment fraction {:?}, witness {:?}",
            r.fraction, r.witness
        ))),
        _ => Ok(()),
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let set: LabeledPointSet = read_json(&a.input)?;
    let cert: PachCertificate = read_json(&a.cert)?;
    let mode = if a.exhaustive {
        VerificationMode::Exhaustive
    } else {
        VerificationMode::Arrangement
    };
    let report = verify_certificate(&set, &cert, mode);
    emit(a.out.as_ref(), &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "fraction {:?}, witness {:?}, {}",
            report.fraction,
            report.witness,
            report.warnings.join("; ")
        )))
    }
}

pub fn deep(a: &DeepArgs) -> Result<(), CliError> {
    let set: LabeledPointSet = read_json(&a.input)?;
    let opts = DeepPointOptions {
        seed: a.seed,
        random_candidates: a.candidates,
        budget: a.budget,
        ..DeepPointOptions::default()
    };
    let point = deep_rainbow_point(&set, &opts)?;
    emit(a.out.as_ref(), &to_json(&point))
}

fn parse_vertices(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    text.split(';')
        .map(|v| {
            v.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Input(format!("vertex coordinate `{x}`: {e}")))
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum AngleOutput {
    SolidAngle {
        vertex: usize,
        estimate: pach_core::cones::Estimate,
    },
    Msa(pach_core::cones::MsaEstimate),
}

pub fn angle(a: &AngleArgs) -> Result<(), CliError> {
    let simplex = Simplex::new(parse_vertices(&a.vertices)?)
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let cone = |e: pach_core::cones::ConeError| CliError::Precondition(e.to_string());
    let out = match a.vertex {
        Some(vertex) => AngleOutput::SolidAngle {
            vertex,
            estimate: solid_angle_mc(&simplex, vertex, a.samples, a.seed).map_err(cone)?,
        },
        None => AngleOutput::Msa(msa_mc(&simplex, a.samples, a.seed).map_err(cone)?),
    };
    emit(a.out.as_ref(), &to_json(&out))
}

pub fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("dimension range `{text}`"));
    let dims: Vec<usize> = match text.split_once("..") {
        Some((lo, hi)) => {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?;
            (lo..=hi).collect()
        }
        None => text
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
    };
    if dims.is_empty() || dims.contains(&0) {
        return Err(bad());
    }
    Ok(dims)
}

pub fn bounds(a: &BoundsArgs) -> Result<(), CliError> {
    let mut csv = String::from(BoundTable::CSV_HEADER);
    csv.push('\n');
    for d in parse_dims(&a.dims)? {
        csv.push_str(&BoundTable::for_dim(d).csv_row());
        csv.push('\n');
    }
    emit(a.out.as_ref(), &csv)
}
