//! Experiment records and the benchmark driver.

use std::fs;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pach_core::cones::BoundTable;
use pach_core::selection::certificate::input_hash;
use pach_core::selection::PipelineParams;

use crate::commands::{emit, generate, parse_dims, select_set, to_json};
use crate::{BenchArgs, CliError, Shape};

/// Everything needed to rerun one command. `timestamp` and `wall_time_ms`
/// are the only fields that differ between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub timestamp: String,
    pub command: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub input_hash: String,
    pub outputs: serde_json::Value,
    pub wall_time_ms: f64,
    pub version: String,
}

impl ExperimentRecord {
    pub fn new(
        command: &str,
        config: serde_json::Value,
        seeds: Vec<u64>,
        input_hash: String,
        outputs: serde_json::Value,
        elapsed: Duration,
    ) -> Self {
        ExperimentRecord {
            timestamp: chrono::Utc::now().to_rfc3339(),
            command: command.to_string(),
            config,
            seeds,
            input_hash,
            outputs,
            wall_time_ms: elapsed.as_secs_f64() * 1e3,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Hash of the reproducible part of the record.
    pub fn content_id(&self) -> String {
        let mut stable = self.clone();
        stable.timestamp.clear();
        stable.wall_time_ms = 0.0;
        let bytes = serde_json::to_vec(&stable).expect("records serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

pub const SUMMARY_HEADER: &str = "dim,n,seed,min_fraction,lower_bound_exponent,verified,runtime_ms";

pub fn bench(a: &BenchArgs) -> Result<(), CliError> {
    if a.shape == Shape::MeasureFile {
        return Err(CliError::Input("bench does not read measure files".into()));
    }
    let dims = parse_dims(&a.dims)?;
    let records_dir = a.out.join("records");
    fs::create_dir_all(&records_dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", records_dir.display())))?;
    let mut summary = format!("{SUMMARY_HEADER}\n");
    for &d in &dims {
        for run in 0..a.runs {
            let seed = a.seed + run;
            let started = Instant::now();
            let set = generate(d, a.shape, a.eps, a.n, seed)?;
            let params = PipelineParams {
                seed,
                ..PipelineParams::default()
            };
            let (cert, report) = select_set(&set, &params)?;
            let elapsed = started.elapsed();
            let passed = report.as_ref().is_some_and(|r| r.passed);
            let config = serde_json::json!({
                "dim": d,
                "shape": a.shape,
                "n": a.n,
                "eps": a.eps,
                "pipeline": params,
            });
            let rec = ExperimentRecord::new(
                "bench",
                config,
                vec![seed],
                input_hash(&set),
                serde_json::json!({ "certificate": &cert, "verification": &report }),
                elapsed,
            );
            let path = records_dir.join(format!("{}.json", &rec.content_id()[..16]));
            emit(Some(&path), &to_json(&rec))?;
            summary.push_str(&format!(
                "{d},{},{seed},{},{},{passed},{:.3}\n",
                set.color_sizes()[0],
                cert.min_fraction(),
                BoundTable::for_dim(d).lower_bound_exponent,
                rec.wall_time_ms
            ));
        }
    }
    emit(Some(&a.out.join("summary.csv")), &summary)
}
