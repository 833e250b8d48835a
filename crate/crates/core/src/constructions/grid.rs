//! Grid-in-ball configurations: one point of each color in every cube of an
//! `ε`-grid that meets the open unit ball, perturbed until condition (G)
//! holds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instances::{quantized, strictly_inside_ball};
use super::ConstructionError;
use crate::cones::bounds::ball_volume;
use crate::geometry::{satisfies_condition_g, ConditionG, LabeledPointSet, Point};
use crate::rational::{from_f64, quantize, Rational};

const G_RETRIES: u64 = 50;
const SAMPLE_TRIES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBallConfig {
    pub dim: usize,
    /// Cube side.
    pub eps: f64,
    pub seed: u64,
    /// Retry perturbations are drawn from `(-perturbation, perturbation)` per
    /// coordinate; defaults to `eps / 1000`.
    pub perturbation: Option<f64>,
    /// Tuple cap handed to the condition (G) check.
    pub condition_g_cap: u64,
}

impl GridBallConfig {
    pub fn new(dim: usize, eps: f64, seed: u64) -> Self {
        GridBallConfig {
            dim,
            eps,
            seed,
            perturbation: None,
            condition_g_cap: crate::geometry::DEFAULT_CONDITION_G_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBall {
    pub set: LabeledPointSet,
    /// Points per color, one per cube.
    pub n: usize,
    /// Integer corner `k` of each cube `[kε, (k+1)ε]^d`.
    pub cubes: Vec<Vec<i64>>,
    /// `β_d / ε^d` and `(1 + ε√d)^d β_d / ε^d`.
    pub sandwich: (f64, f64),
    pub condition_g: ConditionG,
    pub perturbation_rounds: u64,
}

/// Cubes of the `ε`-grid whose interior meets the open unit ball.
pub fn cubes_meeting_ball(d: usize, eps: f64) -> Vec<Vec<i64>> {
    let k_max = (1.0 / eps).ceil() as i64;
    let mut out = Vec::new();
    let mut k = vec![-k_max; d];
    loop {
        // Squared distance from the origin to the closed cube.
        let dist2: f64 = k
            .iter()
            .map(|&ki| {
                let (lo, hi) = (ki as f64 * eps, (ki + 1) as f64 * eps);
                if hi <= 0.0 {
                    hi * hi
                } else if lo >= 0.0 {
                    lo * lo
                } else {
                    0.0
                }
            })
            .sum();
        if dist2 < 1.0 {
            out.push(k.clone());
        }
        let Some(j) = (0..d).rev().find(|&j| k[j] < k_max) else {
            break;
        };
        k[j] += 1;
        for kk in k.iter_mut().skip(j + 1) {
            *kk = -k_max;
        }
    }
    out
}

struct Cube {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl Cube {
    fn new(k: &[i64], eps: &Rational) -> Self {
        Cube {
            lo: k
                .iter()
                .map(|&ki| Rational::from_integer(ki.into()) * eps)
                .collect(),
            hi: k
                .iter()
                .map(|&ki| Rational::from_integer((ki + 1).into()) * eps)
                .collect(),
        }
    }

    fn contains_open(&self, p: &Point) -> bool {
        p.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| lo < x && x < hi)
    }
}

fn sample_in(cube: &Cube, rng: &mut ChaCha8Rng) -> Result<Point, ConstructionError> {
    let lo: Vec<f64> = cube.lo.iter().map(crate::rational::to_f64).collect();
    let hi: Vec<f64> = cube.hi.iter().map(crate::rational::to_f64).collect();
    for _ in 0..SAMPLE_TRIES {
        let x: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| rng.random_range(*a..*b))
            .collect();
        let p = quantized(&x);
        if cube.contains_open(&p) && strictly_inside_ball(&p) {
            return Ok(p);
        }
    }
    Err(ConstructionError::RetriesExhausted(
        "sampling a cube inside the ball",
    ))
}

/// Builds the configuration; retries with fresh small perturbations until
/// condition (G) is not violated. An `Indeterminate` verdict (tuple cap
/// reached) is accepted and reported.
pub fn generate_grid_ball(cfg: &GridBallConfig) -> Result<GridBall, ConstructionError> {
    let d = cfg.dim;
    if d == 0 {
        return Err(crate::geometry::GeometryError::ZeroDimension.into());
    }
    if !(cfg.eps > 0.0 && cfg.eps.is_finite()) {
        return Err(ConstructionError::Parameter(format!("eps = {}", cfg.eps)));
    }
    let cubes = cubes_meeting_ball(d, cfg.eps);
    if cubes.is_empty() {
        return Err(ConstructionError::NoCubes(cfg.eps));
    }
    let eps = from_f64(cfg.eps).map_err(|e| ConstructionError::Parameter(e.to_string()))?;
    let boxes: Vec<Cube> = cubes.iter().map(|k| Cube::new(k, &eps)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut colors: Vec<Vec<Point>> = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        let pts = boxes
            .iter()
            .map(|b| sample_in(b, &mut rng))
            .collect::<Result<Vec<_>, _>>()?;
        colors.push(pts);
    }
    let magnitude = cfg.perturbation.unwrap_or(cfg.eps / 1000.0);
    for round in 0..G_RETRIES {
        let set = LabeledPointSet::new(d, true, colors.clone())?;
        let verdict = satisfies_condition_g(&set, cfg.condition_g_cap);
        if matches!(
            verdict,
            ConditionG::Satisfied | ConditionG::Indeterminate { .. }
        ) {
            let n = cubes.len();
            let scale = cfg.eps.powi(-(d as i32)) * ball_volume(d);
            let upper = scale * (1.0 + cfg.eps * (d as f64).sqrt()).powi(d as i32);
            return Ok(GridBall {
                set,
                n,
                cubes,
                sandwich: (scale, upper),
                condition_g: verdict,
                perturbation_rounds: round,
            });
        }
        for c in colors.iter_mut() {
            for (p, b) in c.iter_mut().zip(&boxes) {
                *p = jiggle(p, b, magnitude, &mut rng);
            }
        }
    }
    Err(ConstructionError::RetriesExhausted("condition (G)"))
}

/// A nearby point, still inside its cube and the ball.
fn jiggle(p: &Point, cube: &Cube, magnitude: f64, rng: &mut ChaCha8Rng) -> Point {
    // Finer than the base grid so that small moves are representable.
    let bits = crate::constructions::instances::QUANT_BITS + 12;
    for _ in 0..100 {
        let q = Point::new(
            p.coords()
                .iter()
                .map(|c| {
                    let delta = quantize(rng.random_range(-magnitude..magnitude), bits);
                    c + delta
                })
                .collect(),
        );
        if q != *p && cube.contains_open(&q) && strictly_inside_ball(&q) {
            return q;
        }
    }
    p.clone()
}

/// Whether `n` lies in the sandwich, allowing the given integer slack.
pub fn within_sandwich(grid: &GridBall, slack: f64) -> bool {
    let n = grid.n as f64;
    grid.sandwich.0 - slack <= n && n <= grid.sandwich.1 + slack
}
