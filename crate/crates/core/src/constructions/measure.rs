//! Discretizing finitely supported rational measures into point sets.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::geometry::{in_general_position, LabeledPointSet, Point};
use crate::rational::{quantize, serde_rational_vec, Rational};

const RETRIES: u64 = 50;

/// Positive rational weights on finitely many points, summing to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPointMeasure {
    pub points: Vec<Point>,
    #[serde(with = "serde_rational_vec")]
    pub weights: Vec<Rational>,
    /// Common denominator `s`; defaults to the least one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<u64>,
}

impl WeightedPointMeasure {
    pub fn new(points: Vec<Point>, weights: Vec<Rational>) -> Result<Self, ConstructionError> {
        let m = WeightedPointMeasure {
            points,
            weights,
            denominator: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_denominator(mut self, s: u64) -> Result<Self, ConstructionError> {
        self.denominator = Some(s);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if self.points.is_empty() || self.points.len() != self.weights.len() {
            return Err(ConstructionError::InvalidMeasure(format!(
                "{} points with {} weights",
                self.points.len(),
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(ConstructionError::InvalidMeasure(
                "weights must be positive".into(),
            ));
        }
        let total: Rational = self.weights.iter().sum();
        if !total.is_one() {
            return Err(ConstructionError::InvalidMeasure(format!(
                "weights sum to {total}"
            )));
        }
        if let Some(s) = self.denominator {
            let s = BigInt::from(s);
            if s.is_zero() || self.weights.iter().any(|w| !(&s % w.denom()).is_zero()) {
                return Err(ConstructionError::InvalidMeasure(format!(
                    "{s} is not a common denominator"
                )));
            }
        }
        Ok(())
    }

    /// The common denominator `s`.
    pub fn common_denominator(&self) -> BigInt {
        match self.denominator {
            Some(s) => BigInt::from(s),
            None => self
                .weights
                .iter()
                .fold(BigInt::one(), |acc, w| acc.lcm(w.denom())),
        }
    }
}

/// Replaces each atom of weight `r/s` by `r` distinct points within distance
/// `spread` of it, so that color `i` receives exactly `s_i` points, and
/// retries until the union is in general position.
pub fn discretize_measure(
    measures: &[WeightedPointMeasure],
    spread: &Rational,
    seed: u64,
) -> Result<LabeledPointSet, ConstructionError> {
    let Some(d) = measures
        .first()
        .and_then(|m| m.points.first())
        .map(Point::dim)
    else {
        return Err(ConstructionError::InvalidMeasure("no measures".into()));
    };
    if !spread.is_positive() {
        return Err(ConstructionError::Parameter(
            "spread must be positive".into(),
        ));
    }
    let mut counts: Vec<Vec<usize>> = Vec::with_capacity(measures.len());
    for m in measures {
        m.validate()?;
        for p in &m.points {
            p.check_dim(d)?;
        }
        let s = m.common_denominator();
        let c = m
            .weights
            .iter()
            .map(|w| {
                (w * Rational::from_integer(s.clone()))
                    .to_integer()
                    .to_usize()
                    .ok_or_else(|| {
                        ConstructionError::InvalidMeasure("denominator too large".into())
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        counts.push(c);
    }
    // Each coordinate moves by less than spread / (2d), so the Euclidean
    // displacement stays below spread / 2.
    let step = crate::rational::to_f64(spread) / (2.0 * d as f64);
    let spread_sq = spread * spread;
    for attempt in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let colors: Vec<Vec<Point>> = measures
            .iter()
            .zip(&counts)
            .map(|(m, c)| {
                m.points
                    .iter()
                    .zip(c)
                    .flat_map(|(p, &r)| (0..r).map(move |_| p))
                    .map(|p| jitter(p, step, &spread_sq, &mut rng))
                    .collect()
            })
            .collect();
        let set = LabeledPointSet::new(d, true, colors)?;
        if in_general_position(&set) {
            return Ok(set);
        }
    }
    Err(ConstructionError::RetriesExhausted("general position"))
}

fn jitter(p: &Point, step: f64, spread_sq: &Rational, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let q = Point::new(
            p.coords()
                .iter()
                .map(|c| c + quantize(rng.random_range(-step..step), 40))
                .collect(),
        );
        if &q.squared_distance(p) < spread_sq && !q.squared_distance(p).is_zero() {
            return q;
        }
    }
}
