//! Large subsets `Y_i ⊆ S_i` such that `p` lies in all or in none of their
//! rainbow simplices, via `d + 1` rounds of ham-sandwich cuts.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ham_sandwich::ham_sandwich_bisect;
use super::perturb::{arrangement_preserving_sides, SideGuard};
use super::SelectionError;
use crate::arrangement::{Dichotomy, HyperplaneArrangement};
use crate::geometry::{
    general_position_witness, LabeledPointSet, OrientedHyperplane, Point, PointId,
};
use crate::rational::{small, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    AllContain,
    NoneContain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationRound {
    /// The color left untouched this round.
    pub skipped: usize,
    /// The shifted cut, with `p` on its negative side.
    pub cut: OrientedHyperplane,
    pub sizes_before: Vec<usize>,
    pub sizes_after: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FewSeparations {
    /// Point indices into each color.
    pub y: Vec<Vec<usize>>,
    pub arrangement: HyperplaneArrangement,
    pub branch: Branch,
    pub rounds: Vec<SeparationRound>,
}

fn validate(set: &LabeledPointSet, parts: &[Vec<usize>], p: &Point) -> Result<(), SelectionError> {
    let d = set.dim();
    p.check_dim(d)?;
    if parts.len() != d + 1 {
        return Err(crate::geometry::GeometryError::WrongCount {
            what: "index sets",
            expected: d + 1,
            found: parts.len(),
        }
        .into());
    }
    for (color, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(SelectionError::SizeUnderflow {
                color,
                size: 0,
                needed: 1,
            });
        }
        if let Some(&index) = part.iter().find(|&&t| t >= set.color(color).len()) {
            return Err(SelectionError::InvalidIndex { color, index });
        }
    }
    let ids: Vec<PointId> = parts
        .iter()
        .enumerate()
        .flat_map(|(color, part)| part.iter().map(move |&index| PointId { color, index }))
        .collect();
    let mut pts: Vec<&Point> = ids.iter().map(|&id| set.point(id)).collect();
    pts.push(p);
    if let Some(w) = general_position_witness(&pts) {
        return Err(SelectionError::NotGeneralPosition {
            witness: w.into_iter().filter_map(|i| ids.get(i).copied()).collect(),
        });
    }
    Ok(())
}

/// Runs the `d + 1` cutting rounds on `S_i = parts[i]` (indices into the
/// colors of `set`) and classifies the outcome with the separation
/// dichotomy of the final arrangement.
///
/// Round `j` bisects every `S_i`, `i != j`, by a spanned ham-sandwich cut,
/// shifts the cut slightly towards `p` so that the points on it move to the
/// far side, and keeps the far side. Each kept set is at least half the
/// previous one, so `|Y_i| >= |S_i| / 2^d`.
pub fn few_separations(
    set: &LabeledPointSet,
    parts: &[Vec<usize>],
    p: &Point,
    seed: u64,
) -> Result<FewSeparations, SelectionError> {
    validate(set, parts, p)?;
    let d = set.dim();
    let mut cur: Vec<Vec<usize>> = parts.to_vec();
    let mut cuts = Vec::with_capacity(d + 1);
    let mut rounds = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let others: Vec<usize> = (0..=d).filter(|&i| i != j).collect();
        let sets: Vec<Vec<&Point>> = others
            .iter()
            .map(|&i| cur[i].iter().map(|&t| &set.color(i)[t]).collect())
            .collect();
        let cut = ham_sandwich_bisect(&sets)?;
        let mut h = cut.hyperplane;
        let fp = h.eval(p);
        if fp.is_zero() {
            return Err(SelectionError::NotGeneralPosition {
                witness: others
                    .iter()
                    .zip(&cut.through)
                    .map(|(&color, &t)| PointId {
                        color,
                        index: cur[color][t],
                    })
                    .collect(),
            });
        }
        if fp.is_positive() {
            h = h.flipped();
        }
        let values: Vec<Rational> = cur
            .iter()
            .enumerate()
            .flat_map(|(i, part)| part.iter().map(move |&t| (i, t)))
            .map(|(i, t)| h.eval(&set.color(i)[t]).abs())
            .filter(|v| !v.is_zero())
            .collect();
        let margin = values
            .into_iter()
            .chain(std::iter::once(h.eval(p).abs()))
            .min()
            .expect("p contributes a value");
        let delta = margin / small(2);
        let shifted = OrientedHyperplane::new(h.normal().to_vec(), h.offset() - delta)?;
        let sizes_before: Vec<usize> = cur.iter().map(Vec::len).collect();
        for &i in &others {
            let kept: Vec<usize> = cur[i]
                .iter()
                .copied()
                .filter(|&t| shifted.eval(&set.color(i)[t]).is_positive())
                .collect();
            if 2 * kept.len() < cur[i].len() {
                return Err(SelectionError::Invariant(format!(
                    "round {j}: color {i} kept {} of {}",
                    kept.len(),
                    cur[i].len()
                )));
            }
            cur[i] = kept;
        }
        if !shifted.eval(p).is_negative() {
            return Err(SelectionError::Invariant(format!(
                "round {j}: shift moved past p"
            )));
        }
        rounds.push(SeparationRound {
            skipped: j,
            cut: shifted.clone(),
            sizes_before,
            sizes_after: cur.iter().map(Vec::len).collect(),
        });
        cuts.push(shifted);
    }

    let ys: Vec<Vec<&Point>> = cur
        .iter()
        .enumerate()
        .map(|(i, part)| part.iter().map(|&t| &set.color(i)[t]).collect())
        .collect();
    let guards: Vec<SideGuard> = (0..=d)
        .map(|j| SideGuard {
            negative: vec![p],
            positive: (0..=d)
                .filter(|&i| i != j)
                .flat_map(|i| ys[i].iter().copied())
                .collect(),
        })
        .collect();
    let arrangement = arrangement_preserving_sides(cuts, &guards, seed)?;
    let branch = match arrangement.separation_dichotomy(p, &ys)? {
        Dichotomy::Inside => Branch::AllContain,
        Dichotomy::Outside { .. } => Branch::NoneContain,
    };
    Ok(FewSeparations {
        y: cur,
        arrangement,
        branch,
        rounds,
    })
}
