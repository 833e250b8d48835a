//! Weak hypergraph regularity by density increment.
//!
//! Keep equal-size parts `S_1..S_k`. Look for subsets `Y_i ⊆ S_i` of size
//! `m = ⌈εs⌉` spanning no edge. If one exists, the remaining `2^k - 1` boxes
//! of the split `S_i = Y_i ∪ (S_i \ Y_i)` carry all the edges, so one of them
//! is strictly denser; restrict to it, trim every part to the common size
//! `min(m, s - m)` keeping the highest-degree vertices, and repeat.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hypergraph::{Radix, RainbowHypergraph};
use super::SelectionError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityParams {
    pub epsilon: f64,
    /// Density floor.
    pub beta: f64,
    /// Exhaustive search runs when `C(s, m)^k` is at most this.
    pub witness_budget: u128,
    /// Randomized witness trials per round otherwise.
    pub trials: usize,
    pub seed: u64,
}

impl RegularityParams {
    pub fn new(epsilon: f64, beta: f64) -> Self {
        RegularityParams {
            epsilon,
            beta,
            witness_budget: 1_000_000,
            trials: 2000,
            seed: 0,
        }
    }

    fn witness_size(&self, s: usize) -> usize {
        ((self.epsilon * s as f64).ceil() as usize).clamp(1, s.max(1))
    }
}

/// What the final, unsuccessful witness search established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessReport {
    /// Every `m`-subset tuple spans an edge.
    ExhaustiveClean,
    /// No empty tuple found in this many randomized trials.
    SampledClean { trials: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityStep {
    pub s_before: usize,
    pub s_after: usize,
    pub density_before: f64,
    pub density_after: f64,
    /// `true` when the empty tuple came from outside the search.
    pub external: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityResult {
    /// Positions into the hypergraph's parts.
    pub positions: Vec<Vec<usize>>,
    /// Point indices into each color.
    pub parts: Vec<Vec<usize>>,
    pub s: usize,
    /// `⌈εs⌉` for the final `s`.
    pub m: usize,
    pub edges: u64,
    pub density: f64,
    pub report: WitnessReport,
    pub steps: Vec<RegularityStep>,
    /// `β^{1/ε^k}·n`, for comparison only.
    pub asymptotic_size_floor: f64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn union_count(&self, other: &Bits) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a | b).count_ones())
            .sum()
    }
}

/// For each tuple of the first `k - 1` parts (local indices), the set of
/// last-part vertices completing it to an edge.
struct Blocks {
    radix: Radix,
    masks: Vec<Bits>,
    s: usize,
}

impl Blocks {
    fn new(h: &RainbowHypergraph, cur: &[Vec<usize>]) -> Self {
        let k = cur.len();
        let s = cur[k - 1].len();
        let radix = Radix::new(cur[..k - 1].iter().map(Vec::len).collect());
        let mut pos = vec![0; k];
        let masks = (0..radix.len())
            .map(|t| {
                for (j, &l) in radix.decode(t).iter().enumerate() {
                    pos[j] = cur[j][l];
                }
                let mut bits = Bits::zeros(s);
                for (v, &last) in cur[k - 1].iter().enumerate() {
                    pos[k - 1] = last;
                    if h.is_edge(&pos) {
                        bits.set(v);
                    }
                }
                bits
            })
            .collect();
        Blocks { radix, masks, s }
    }

    /// Union of the masks over the product of the given local subsets.
    fn blocked(&self, ys: &[Vec<usize>]) -> Bits {
        let mut acc = Bits::zeros(self.s);
        let inner = Radix::new(ys.iter().map(Vec::len).collect());
        let mut digits = vec![0; ys.len()];
        for t in 0..inner.len() {
            for (j, &l) in inner.decode(t).iter().enumerate() {
                digits[j] = ys[j][l];
            }
            acc.or_assign(&self.masks[self.radix.encode(&digits)]);
        }
        acc
    }

    fn free(&self, blocked: &Bits, m: usize) -> Option<Vec<usize>> {
        let free: Vec<usize> = (0..self.s).filter(|&v| !blocked.get(v)).take(m).collect();
        (free.len() == m).then_some(free)
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] != i + n - k) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// Local indices of an empty `m`-tuple, by exhaustive enumeration.
fn search_exhaustive(blocks: &Blocks, k: usize, s: usize, m: usize) -> Option<Vec<Vec<usize>>> {
    let mut ys: Vec<Vec<usize>> = vec![(0..m).collect(); k - 1];
    loop {
        let blocked = blocks.blocked(&ys);
        if let Some(last) = blocks.free(&blocked, m) {
            ys.push(last);
            return Some(ys);
        }
        // Odometer over the k - 1 combinations, last part fastest.
        let mut j = k - 1;
        loop {
            if j == 0 {
                return None;
            }
            j -= 1;
            if next_combination(&mut ys[j], s) {
                for y in ys.iter_mut().skip(j + 1) {
                    *y = (0..m).collect();
                }
                break;
            }
        }
    }
}

/// Random subsets for all but the last two parts, then a greedy choice in
/// part `k - 2` that blocks as few last-part vertices as possible.
fn search_sampled(
    blocks: &Blocks,
    k: usize,
    s: usize,
    m: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    for _ in 0..trials {
        let mut ys: Vec<Vec<usize>> = (0..k - 2)
            .map(|_| {
                let mut y = sample(rng, s, m).into_vec();
                y.sort_unstable();
                y
            })
            .collect();
        let candidate_masks: Vec<Bits> = (0..s)
            .map(|v| {
                let mut with_v = ys.clone();
                with_v.push(vec![v]);
                blocks.blocked(&with_v)
            })
            .collect();
        let mut order: Vec<usize> = (0..s).collect();
        order.shuffle(rng);
        let mut acc = Bits::zeros(s);
        let mut chosen = Vec::with_capacity(m);
        for _ in 0..m {
            let &best = order
                .iter()
                .filter(|v| !chosen.contains(*v))
                .min_by_key(|&&v| acc.union_count(&candidate_masks[v]))
                .expect("m <= s");
            acc.or_assign(&candidate_masks[best]);
            chosen.push(best);
        }
        if let Some(last) = blocks.free(&acc, m) {
            chosen.sort_unstable();
            ys.push(chosen);
            ys.push(last);
            return Some(ys);
        }
    }
    None
}

fn box_size(parts: &[Vec<usize>]) -> u128 {
    parts.iter().map(|p| p.len() as u128).product()
}

/// Replaces `cur` by a denser equal-size box avoiding the empty tuple `w`
/// (positions, `w[i] ⊆ cur[i]`).
fn restrict(
    h: &RainbowHypergraph,
    cur: &[Vec<usize>],
    w: &[Vec<usize>],
    external: bool,
) -> Result<(Vec<Vec<usize>>, RegularityStep), SelectionError> {
    let k = cur.len();
    if h.box_edges(w) != 0 {
        return Err(SelectionError::Invariant(
            "witness tuple spans an edge".into(),
        ));
    }
    let split: Vec<[Vec<usize>; 2]> = cur
        .iter()
        .zip(w)
        .map(|(c, wi)| {
            let rest: Vec<usize> = c.iter().copied().filter(|x| !wi.contains(x)).collect();
            [rest, wi.clone()]
        })
        .collect();
    let mut best: Option<(u64, u128, Vec<Vec<usize>>)> = None;
    for mask in 0..(1usize << k) - 1 {
        let parts: Vec<Vec<usize>> = (0..k).map(|i| split[i][mask >> i & 1].clone()).collect();
        if parts.iter().any(Vec::is_empty) {
            continue;
        }
        let e = h.box_edges(&parts);
        let size = box_size(&parts);
        let denser = best
            .as_ref()
            .is_none_or(|(be, bs, _)| e as u128 * bs > *be as u128 * size);
        if denser {
            best = Some((e, size, parts));
        }
    }
    let (_, _, mut parts) =
        best.ok_or_else(|| SelectionError::Invariant("no nonempty box left".into()))?;
    let target = parts.iter().map(Vec::len).min().expect("k parts");
    for i in 0..k {
        if parts[i].len() == target {
            continue;
        }
        let mut scored: Vec<(u64, usize)> = parts[i]
            .iter()
            .map(|&v| {
                let mut single = parts.clone();
                single[i] = vec![v];
                (h.box_edges(&single), v)
            })
            .collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut kept: Vec<usize> = scored[..target].iter().map(|&(_, v)| v).collect();
        kept.sort_unstable();
        parts[i] = kept;
    }
    let (e0, n0) = (h.box_edges(cur), box_size(cur));
    let (e1, n1) = (h.box_edges(&parts), box_size(&parts));
    if (e1 as u128) * n0 < (e0 as u128) * n1 {
        return Err(SelectionError::Invariant("density decreased".into()));
    }
    if target >= cur[0].len() {
        return Err(SelectionError::Invariant(
            "part size did not decrease".into(),
        ));
    }
    let step = RegularityStep {
        s_before: cur[0].len(),
        s_after: target,
        density_before: e0 as f64 / n0 as f64,
        density_after: e1 as f64 / n1 as f64,
        external,
    };
    Ok((parts, step))
}

fn validate(h: &RainbowHypergraph, params: &RegularityParams) -> Result<(), SelectionError> {
    if !(params.epsilon > 0.0 && params.epsilon <= 0.5) {
        return Err(SelectionError::Invariant(format!(
            "epsilon {} outside (0, 1/2]",
            params.epsilon
        )));
    }
    if !(params.beta > 0.0) {
        return Err(SelectionError::Invariant("beta must be positive".into()));
    }
    let sizes = h.sizes();
    if sizes.len() < 2 || sizes.iter().any(|&n| n != sizes[0]) || sizes[0] == 0 {
        return Err(SelectionError::UnequalSizes(sizes.to_vec()));
    }
    Ok(())
}

fn run(
    h: &RainbowHypergraph,
    params: &RegularityParams,
    mut cur: Vec<Vec<usize>>,
    mut steps: Vec<RegularityStep>,
    rng: &mut ChaCha8Rng,
) -> Result<RegularityResult, SelectionError> {
    let k = cur.len();
    loop {
        let s = cur[0].len();
        let m = params.witness_size(s);
        let blocks = Blocks::new(h, &cur);
        let exhaustive = binomial(s, m).saturating_pow(k as u32) <= params.witness_budget;
        let found = if exhaustive {
            search_exhaustive(&blocks, k, s, m)
        } else {
            search_sampled(&blocks, k, s, m, params.trials, rng)
        };
        match found {
            Some(local) => {
                let w: Vec<Vec<usize>> = local
                    .iter()
                    .zip(&cur)
                    .map(|(l, c)| l.iter().map(|&i| c[i]).collect())
                    .collect();
                let (next, step) = restrict(h, &cur, &w, false)?;
                steps.push(step);
                cur = next;
            }
            None => {
                let report = if exhaustive {
                    WitnessReport::ExhaustiveClean
                } else {
                    WitnessReport::SampledClean {
                        trials: params.trials,
                    }
                };
                return Ok(finish(h, params, cur, m, report, steps));
            }
        }
    }
}

fn finish(
    h: &RainbowHypergraph,
    params: &RegularityParams,
    positions: Vec<Vec<usize>>,
    m: usize,
    report: WitnessReport,
    steps: Vec<RegularityStep>,
) -> RegularityResult {
    let edges = h.box_edges(&positions);
    let s = positions[0].len();
    let k = positions.len() as i32;
    let n = h.sizes()[0] as f64;
    let parts = positions
        .iter()
        .enumerate()
        .map(|(i, ps)| ps.iter().map(|&t| h.parts()[i][t].index).collect())
        .collect();
    RegularityResult {
        density: edges as f64 / box_size(&positions) as f64,
        parts,
        positions,
        s,
        m,
        edges,
        report,
        steps,
        asymptotic_size_floor: params.beta.powf(1.0 / params.epsilon.powi(k)) * n,
    }
}

fn round_rng(params: &RegularityParams, round: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(round as u64);
    rng
}

pub fn weak_regularity(
    h: &RainbowHypergraph,
    params: &RegularityParams,
) -> Result<RegularityResult, SelectionError> {
    validate(h, params)?;
    let density = h.density();
    if density < params.beta {
        return Err(SelectionError::DensityBelowFloor {
            density,
            beta: params.beta,
        });
    }
    let full: Vec<Vec<usize>> = h.sizes().iter().map(|&n| (0..n).collect()).collect();
    run(h, params, full, Vec::new(), &mut round_rng(params, 0))
}

/// Resumes from `prior` after an empty tuple was found elsewhere.
/// `witness[i]` holds point indices of color `i` inside `prior.parts[i]`.
pub fn continue_regularity(
    h: &RainbowHypergraph,
    params: &RegularityParams,
    prior: &RegularityResult,
    witness: &[Vec<usize>],
) -> Result<RegularityResult, SelectionError> {
    validate(h, params)?;
    let mut w = Vec::with_capacity(witness.len());
    for (i, wi) in witness.iter().enumerate() {
        let mut pos = Vec::with_capacity(wi.len());
        for &index in wi {
            let t = prior.parts[i]
                .iter()
                .position(|&x| x == index)
                .ok_or(SelectionError::InvalidIndex { color: i, index })?;
            pos.push(prior.positions[i][t]);
        }
        pos.sort_unstable();
        w.push(pos);
    }
    let (next, step) = restrict(h, &prior.positions, &w, true)?;
    let mut steps = prior.steps.clone();
    steps.push(step);
    let round = steps.iter().filter(|s| s.external).count();
    run(h, params, next, steps, &mut round_rng(params, round))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn origin() -> Point {
        Point::from_ints(&[0])
    }

    #[test]
    fn complete_hypergraph_is_untouched() {
        let h = RainbowHypergraph::from_predicate(vec![5, 5], origin(), |_| true);
        let r = weak_regularity(&h, &RegularityParams::new(0.5, 0.9)).unwrap();
        assert_eq!(r.positions, vec![(0..5).collect::<Vec<_>>(); 2]);
        assert!(r.steps.is_empty());
        assert_eq!(r.report, WitnessReport::ExhaustiveClean);
        assert_eq!(r.density, 1.0);
    }

    #[test]
    fn dense_quadrant_is_found() {
        // Edges exactly on the left half of part 0 times the right half of
        // part 1: density 1/4.
        let h = RainbowHypergraph::from_predicate(vec![4, 4], origin(), |t| t[0] < 2 && t[1] >= 2);
        assert_eq!(h.density(), 0.25);
        let r = weak_regularity(&h, &RegularityParams::new(0.5, 0.25)).unwrap();
        assert_eq!(r.positions, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(r.density, 1.0);
        assert_eq!(r.report, WitnessReport::ExhaustiveClean);
        assert_eq!(r.steps.len(), 1);
    }

    #[test]
    fn density_floor_is_checked() {
        let h = RainbowHypergraph::from_predicate(vec![4, 4], origin(), |t| t[0] == t[1]);
        assert!(matches!(
            weak_regularity(&h, &RegularityParams::new(0.5, 0.5)),
            Err(SelectionError::DensityBelowFloor { .. })
        ));
    }

    #[test]
    fn sampled_search_on_large_parts() {
        // Three parts of 12; edges need a small coordinate sum.
        let h =
            RainbowHypergraph::from_predicate(vec![12, 12, 12], Point::from_ints(&[0, 0]), |t| {
                t.iter().sum::<usize>() < 18
            });
        let mut params = RegularityParams::new(0.25, h.density());
        params.witness_budget = 0;
        params.trials = 50;
        let r = weak_regularity(&h, &params).unwrap();
        assert!(matches!(
            r.report,
            WitnessReport::SampledClean { trials: 50 }
        ));
        assert!(r.density >= h.density());
        for w in r.steps.windows(2) {
            assert!(w[1].density_before >= w[0].density_before);
        }
        for st in &r.steps {
            assert!(st.s_after < st.s_before);
            assert!(st.density_after >= st.density_before);
        }
    }

    #[test]
    fn exhaustive_and_sampled_agree_on_existence() {
        let h = RainbowHypergraph::from_predicate(vec![6, 6, 6], Point::from_ints(&[0, 0]), |t| {
            (t[0] * 7 + t[1] * 3 + t[2] * 5) % 4 != 0
        });
        let cur: Vec<Vec<usize>> = vec![(0..6).collect(); 3];
        let blocks = Blocks::new(&h, &cur);
        for m in 1..=3 {
            let ex = search_exhaustive(&blocks, 3, 6, m);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            if let Some(w) = search_sampled(&blocks, 3, 6, m, 200, &mut rng) {
                assert_eq!(h.box_edges(&w), 0);
                assert!(ex.is_some());
            }
            if let Some(w) = ex {
                assert_eq!(h.box_edges(&w), 0);
                assert!(w.iter().all(|y| y.len() == m));
            }
        }
    }

    #[test]
    fn external_witness_restricts() {
        let h = RainbowHypergraph::from_predicate(vec![4, 4], origin(), |t| t[0] < 2 && t[1] >= 2);
        let params = RegularityParams::new(0.5, 0.25);
        let full = finish(
            &h,
            &params,
            vec![(0..4).collect(), (0..4).collect()],
            2,
            WitnessReport::SampledClean { trials: 0 },
            Vec::new(),
        );
        let r = continue_regularity(&h, &params, &full, &[vec![2, 3], vec![0, 1]]).unwrap();
        assert_eq!(r.parts, vec![vec![0, 1], vec![2, 3]]);
        assert!(r.steps[0].external);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(15, 4), 1365);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(4, 4), 1);
    }
}
