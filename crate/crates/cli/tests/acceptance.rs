//! The ten acceptance criteria. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use pach_core::arrangement::{random_arrangement, CoverVerdict};
use pach_core::cones::sampling::{chunk_rng, gaussian, sub_seed};
use pach_core::cones::{msa_mc, msa_upper_bound, normal_fan_cover_check, solid_angle_mc, Simplex};
use pach_core::constructions::{corner_volume_audit, symmetric_instance, uniform_ball_instance};
use pach_core::geometry::{in_convex_hull, strict_separation, Mode, Point, Separation};
use pach_core::rational::{quantize, ratio, Rational};
use pach_core::selection::{
    deep_rainbow_point, few_separations, run_pipeline, shrink_to_generic, Branch, DeepPointOptions,
    PipelineParams, RainbowSimplices,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn pach() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pach"))
}

fn run(cmd: &mut Command) -> (i32, Vec<u8>) {
    let out = cmd.output().expect("pach runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

/// Integer in `lo..=hi` from a seed and a counter.
fn pick(seed: u64, idx: u64, lo: i64, hi: i64) -> i64 {
    lo + (sub_seed(seed, idx) % (hi - lo + 1) as u64) as i64
}

fn end_to_end() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (1, "grid-ball", "0.2", "10"),
        (1, "uniform-ball", "0.5", "10"),
        (2, "grid-ball", "0.5", "15"),
        (2, "uniform-ball", "0.5", "15"),
    ];
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut runs = 0;
    for (d, shape, eps, n) in cases {
        for seed in 0..20u64 {
            let pts = dir.path().join(format!("{d}-{shape}-{seed}.json"));
            let cert = dir.path().join(format!("{d}-{shape}-{seed}.cert.json"));
            let s = seed.to_string();
            let d_arg = d.to_string();
            let t = Instant::now();
            let (gen, _) = run(pach()
                .args(["gen", "--dim", &d_arg, "--shape", shape, "--eps", eps])
                .args(["--n", n, "--seed", &s, "--out"])
                .arg(&pts));
            let (sel, _) = run(pach()
                .args(["select", "--seed", &s, "--input"])
                .arg(&pts)
                .arg("--out")
                .arg(&cert));
            let (ver, out) = run(pach()
                .args(["verify", "--exhaustive", "--input"])
                .arg(&pts)
                .arg("--cert")
                .arg(&cert));
            if d == 2 {
                slowest = slowest.max(t.elapsed());
            }
            runs += 1;
            let fraction = serde_json::from_slice::<serde_json::Value>(&out)
                .ok()
                .and_then(|v| v["fraction"].as_f64());
            if (gen, sel, ver) != (0, 0, 0) || fraction != Some(1.0) {
                bad.push(format!(
                    "d={d} {shape} seed={seed} exits=({gen},{sel},{ver})"
                ));
            }
        }
    }
    outcome(
        bad.is_empty() && slowest < Duration::from_secs(60),
        format!(
            "{}/{runs} certificates with exhaustive fraction 1, slowest d=2 run {:.2}s {:?}",
            runs - bad.len(),
            slowest.as_secs_f64(),
            bad
        ),
    )
}

fn deep_point_constant() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut slowest = Duration::ZERO;
    for seed in 0..10 {
        let set = symmetric_instance(2, 20, seed).unwrap();
        let t = Instant::now();
        let deep = deep_rainbow_point(
            &set,
            &DeepPointOptions {
                seed,
                ..DeepPointOptions::default()
            },
        )
        .unwrap();
        slowest = slowest.max(t.elapsed());
        worst = worst.min(deep.fraction());
    }
    outcome(
        worst >= 0.15 && slowest < Duration::from_secs(30),
        format!(
            "min depth/total {worst:.4} (target 0.15, asymptotic 2/9), slowest {:.2}s",
            slowest.as_secs_f64()
        ),
    )
}

fn few_separations_law() -> Outcome {
    let mut failures = Vec::new();
    let mut branches = [0; 2];
    for seed in 0..100u64 {
        let set = uniform_ball_instance(2, 40, seed).unwrap();
        // Deep anchors on even seeds, random central ones otherwise.
        let p = if seed % 2 == 0 {
            let opts = DeepPointOptions {
                seed,
                random_candidates: 20,
                ..DeepPointOptions::default()
            };
            deep_rainbow_point(&set, &opts).unwrap().p
        } else {
            let mut rng = chunk_rng(seed, 99);
            let c = pach_core::cones::sampling::in_unit_ball(&mut rng, 2);
            Point::new(c.iter().map(|x| quantize(x * 0.3, 24)).collect())
        };
        let parts: Vec<Vec<usize>> = vec![(0..40).collect(); 3];
        let out = match few_separations(&set, &parts, &p, seed) {
            Ok(out) => out,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        if out.y.iter().any(|y| y.len() < 10) {
            failures.push(format!(
                "seed {seed}: sizes {:?}",
                out.y.iter().map(Vec::len).collect::<Vec<_>>()
            ));
        }
        let ys: Vec<Vec<&Point>> = out
            .y
            .iter()
            .enumerate()
            .map(|(i, y)| y.iter().map(|&t| &set.color(i)[t]).collect())
            .collect();
        let bits = RainbowSimplices::new(ys).containment(&p, Mode::Closed);
        let agrees = match out.branch {
            Branch::AllContain => {
                branches[0] += 1;
                bits.iter().all(|&b| b)
            }
            Branch::NoneContain => {
                branches[1] += 1;
                bits.iter().all(|&b| !b)
            }
        };
        if !agrees {
            failures.push(format!(
                "seed {seed}: branch {:?} disagrees with the oracle",
                out.branch
            ));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 runs, all-contain {} / none-contain {}, failures {:?}",
            branches[0], branches[1], failures
        ),
    )
}

fn solid_angle_calibration() -> Outcome {
    let h = 3f64.sqrt() / 2.0;
    let tri = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]).unwrap();
    let e = solid_angle_mc(&tri, 0, 1_000_000, 1).unwrap().mean;
    let s = 1.0 / 8f64.sqrt();
    let tet = Simplex::new(vec![
        vec![s, s, s],
        vec![s, -s, -s],
        vec![-s, s, -s],
        vec![-s, -s, s],
    ])
    .unwrap();
    let oracle =
        (3.0 * (1.0f64 / 3.0).acos() - std::f64::consts::PI) / (4.0 * std::f64::consts::PI);
    let t = solid_angle_mc(&tet, 0, 1_000_000, 2).unwrap().mean;
    outcome(
        (e - 1.0 / 6.0).abs() < 0.005 && (t - oracle).abs() < 0.005,
        format!("triangle {e:.5} vs 1/6, tetrahedron {t:.5} vs {oracle:.5}"),
    )
}

fn random_simplex(d: usize, seed: u64) -> Simplex {
    let mut rng = chunk_rng(seed, d as u64);
    loop {
        if let Ok(s) = Simplex::new((0..=d).map(|_| gaussian(&mut rng, d)).collect()) {
            return s;
        }
    }
}

fn msa_bound_audit() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for d in [3, 4] {
        let u = msa_upper_bound(d);
        let mut pass = 0;
        let mut largest: f64 = 0.0;
        for trial in 0..200u64 {
            let s = random_simplex(d, 1000 + trial);
            let m = msa_mc(&s, 100_000, trial).unwrap();
            largest = largest.max(m.value);
            if m.value <= u + 3.0 * m.std_error {
                pass += 1;
            }
        }
        ok &= pass == 200;
        detail.push(format!(
            "d={d}: {pass}/200 below u={u:.4} (largest msa {largest:.4})"
        ));
    }
    outcome(ok, detail.join(", "))
}

fn normal_fan_audit() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for d in [2, 3] {
        let mut pass = 0;
        for trial in 0..100u64 {
            let s = random_simplex(d, 5000 + trial);
            let fan = normal_fan_cover_check(&s, 100_000, trial).unwrap();
            if fan.coverage == 1.0
                && fan.max_fraction >= 1.0 / (d as f64 + 1.0) - 3.0 * fan.std_error
            {
                pass += 1;
            }
        }
        ok &= pass == 100;
        detail.push(format!("d={d}: {pass}/100"));
    }
    outcome(ok, detail.join(", "))
}

fn corner_volume() -> Outcome {
    let mut pass = 0;
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        let result = (|| -> Result<bool, String> {
            let set = uniform_ball_instance(2, 12, seed).map_err(|e| e.to_string())?;
            let params = PipelineParams {
                seed,
                ..PipelineParams::default()
            };
            let cert = run_pipeline(&set, &params).map_err(|e| e.to_string())?;
            let colors: Vec<Vec<Point>> = cert
                .y
                .iter()
                .enumerate()
                .map(|(i, y)| y.iter().map(|&t| set.color(i)[t].clone()).collect())
                .collect();
            let cfg = shrink_to_generic(colors, &cert.p, seed, 10_000_000)
                .map_err(|e| e.to_string())?
                .config;
            let audit = corner_volume_audit(&cfg, 1_000_000, seed).map_err(|e| e.to_string())?;
            Ok(audit.pass)
        })();
        match result {
            Ok(true) => pass += 1,
            Ok(false) => failures.push(format!("seed {seed}: bound exceeded")),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    outcome(pass == 50, format!("{pass}/50 within 3σ {failures:?}"))
}

fn corners_cover() -> Outcome {
    let mut covered = 0;
    let mut errors = Vec::new();
    for k in 0..10_000u64 {
        let d = 1 + (k % 3) as usize;
        let mut rng = chunk_rng(7, k);
        let arr = random_arrangement(d, &mut rng);
        let corners: Vec<Point> = (0..=d)
            .map(|i| arr.random_corner_point(i, &mut rng))
            .collect();
        let p = arr.random_simplex_point(&mut rng);
        match arr.corners_cover_simplex(&corners, &p) {
            Ok(CoverVerdict::Covered) => covered += 1,
            Ok(CoverVerdict::Counterexample(_)) => {
                errors.push(format!("instance {k}: counterexample"))
            }
            Err(e) => errors.push(format!("instance {k}: {e}")),
        }
    }
    outcome(
        covered == 10_000,
        format!("{covered}/10000 covered {errors:?}"),
    )
}

fn oracle_duality() -> Outcome {
    let mut agree = 0;
    let mut infeasible = 0;
    let mut total = 0;
    for d in 1..=3usize {
        for k in 0..1000u64 {
            let seed = sub_seed(d as u64, k);
            let mut idx = 0;
            let mut next = |lo, hi| {
                idx += 1;
                pick(seed, idx, lo, hi)
            };
            let m = d + 2;
            let set: Vec<Point> = (0..m)
                .map(|_| Point::new((0..d).map(|_| ratio(next(-12, 12), next(1, 4))).collect()))
                .collect();
            // Every other instance is a convex combination of the set.
            let p = if k % 2 == 0 {
                let w: Vec<i64> = (0..m).map(|_| next(0, 3)).collect();
                let total_w = w.iter().sum::<i64>().max(1);
                Point::new(
                    (0..d)
                        .map(|j| {
                            set.iter()
                                .zip(&w)
                                .map(|(q, &wi)| &q.coords()[j] * ratio(wi, total_w))
                                .sum::<Rational>()
                        })
                        .collect(),
                )
            } else {
                Point::new((0..d).map(|_| ratio(next(-12, 12), next(1, 4))).collect())
            };
            let refs: Vec<&Point> = set.iter().collect();
            let member = in_convex_hull(&p, &refs);
            let sep = strict_separation(&p, &refs).unwrap();
            total += 1;
            if matches!(sep, Separation::Infeasible) {
                infeasible += 1;
            }
            if matches!(sep, Separation::Infeasible) == member {
                agree += 1;
            }
        }
    }
    outcome(
        agree == total,
        format!("{agree}/{total} agree ({infeasible} infeasible)"),
    )
}

fn strip_volatile(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timestamp");
        obj.remove("wall_time_ms");
    }
    v
}

fn determinism() -> Outcome {
    // Each command's stdout twice; records compared without their timing fields.
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let pts = path("pts.json");
    let cert = path("cert.json");
    run(pach()
        .args([
            "gen",
            "--dim",
            "2",
            "--shape",
            "uniform-ball",
            "--n",
            "12",
            "--seed",
            "4",
            "--out",
        ])
        .arg(&pts));
    run(pach()
        .args(["select", "--seed", "4", "--input"])
        .arg(&pts)
        .arg("--out")
        .arg(&cert));
    let commands: Vec<(&str, Vec<std::ffi::OsString>)> = vec![
        (
            "gen",
            os(&[
                "gen",
                "--dim",
                "2",
                "--shape",
                "grid-ball",
                "--eps",
                "0.5",
                "--seed",
                "9",
            ]),
        ),
        (
            "select",
            [
                os(&["select", "--seed", "4", "--input"]),
                vec![pts.clone().into()],
            ]
            .concat(),
        ),
        (
            "verify",
            [
                os(&["verify", "--exhaustive", "--input"]),
                vec![pts.clone().into(), "--cert".into(), cert.clone().into()],
            ]
            .concat(),
        ),
        (
            "deep",
            [
                os(&["deep", "--seed", "2", "--input"]),
                vec![pts.clone().into()],
            ]
            .concat(),
        ),
        (
            "angle",
            os(&[
                "angle",
                "--vertices",
                "0,0;1,0;0,1",
                "--samples",
                "200000",
                "--seed",
                "3",
            ]),
        ),
        ("bounds", os(&["bounds", "--dims", "1..6"])),
    ];
    let mut same = Vec::new();
    let mut differ = Vec::new();
    for (name, args) in &commands {
        let a = run(pach().args(args));
        let b = run(pach().args(args));
        if a == b && a.0 == 0 && !a.1.is_empty() {
            same.push(*name);
        } else {
            differ.push(*name);
        }
    }
    let rec = |p: &Path| {
        run(pach()
            .args(["select", "--seed", "4", "--input"])
            .arg(&pts)
            .arg("--out")
            .arg(path("c.json"))
            .arg("--record")
            .arg(p));
        strip_volatile(&std::fs::read(p).unwrap())
    };
    if rec(&path("r1.json")) == rec(&path("r2.json")) {
        same.push("record");
    } else {
        differ.push("record");
    }
    outcome(
        differ.is_empty(),
        format!("identical: {same:?}, differing: {differ:?}"),
    )
}

fn os(args: &[&str]) -> Vec<std::ffi::OsString> {
    args.iter().map(Into::into).collect()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("end-to-end soundness", end_to_end),
        ("deep-point constant", deep_point_constant),
        ("few-separations law", few_separations_law),
        ("solid-angle calibration", solid_angle_calibration),
        ("msa bound audit", msa_bound_audit),
        ("normal-fan audit", normal_fan_audit),
        ("corner-volume audit", corner_volume),
        ("corner cover invariant", corners_cover),
        ("separation/hull duality", oracle_duality),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        if !o.ok {
            failed += 1;
        }
        println!(
            "{} {:>2}. {name}: {} [{:.1}s]",
            if o.ok { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
