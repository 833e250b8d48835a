//! Exact ham-sandwich cuts in low dimension by enumerating spanned
//! hyperplanes.

use serde::{Deserialize, Serialize};

use super::hypergraph::Radix;
use super::SelectionError;
use crate::geometry::{spanned_hyperplane, OrientedHyperplane, Point, Sign};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamSandwichCut {
    pub hyperplane: OrientedHyperplane,
    /// Index into each set of the point the cut passes through.
    pub through: Vec<usize>,
}

/// Number of points of `set` strictly on the negative and positive sides.
pub fn side_counts(h: &OrientedHyperplane, set: &[&Point]) -> (usize, usize) {
    set.iter().fold((0, 0), |(neg, pos), x| match h.side(x) {
        Sign::Negative => (neg + 1, pos),
        Sign::Positive => (neg, pos + 1),
        Sign::Zero => (neg, pos),
    })
}

/// Whether each open side of `h` holds at most `⌊|S|/2⌋` points of every set.
pub fn bisects(h: &OrientedHyperplane, sets: &[Vec<&Point>]) -> bool {
    sets.iter().all(|s| {
        let (neg, pos) = side_counts(h, s);
        neg <= s.len() / 2 && pos <= s.len() / 2
    })
}

/// First hyperplane, in lexicographic order of `(t_1, ..., t_d)`, through
/// the points `sets[0][t_1], ..., sets[d-1][t_d]` that bisects every set.
///
/// For sets in general position such a cut always exists: when all sizes
/// are odd some ham-sandwich cut passes through exactly one point of each
/// set, and an even set can drop a point first.
pub fn ham_sandwich_bisect(sets: &[Vec<&Point>]) -> Result<HamSandwichCut, SelectionError> {
    let d = sets.len();
    if d == 0 || d > 3 {
        return Err(SelectionError::Dimension(d));
    }
    for (color, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(SelectionError::SizeUnderflow {
                color,
                size: 0,
                needed: 1,
            });
        }
        for x in s {
            x.check_dim(d)?;
        }
    }
    let radix = Radix::new(sets.iter().map(Vec::len).collect());
    for idx in 0..radix.len() {
        let through = radix.decode(idx);
        let pts: Vec<&Point> = through.iter().zip(sets).map(|(&t, s)| s[t]).collect();
        let Some(h) = spanned_hyperplane(&pts) else {
            continue;
        };
        if bisects(&h, sets) {
            return Ok(HamSandwichCut {
                hyperplane: h,
                through,
            });
        }
    }
    Err(SelectionError::NoSpannedCut)
}
