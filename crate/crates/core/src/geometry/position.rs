//! General position and condition (G).

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg::solve_any;
use super::point::{LabeledPointSet, OrientedHyperplane, Point, PointId};
use super::predicates::{affinely_independent, orientation_unchecked, spanned_hyperplane};
use crate::rational::{to_f64, Rational};
use num::{One, Zero};

/// Default cap on examined tuples before condition (G) gives up.
pub const DEFAULT_CONDITION_G_CAP: u64 = 10_000_000;

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order; stops early
/// when `f` returns `false`.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Indices of some affinely dependent subset of size `<= d + 1`, if any.
pub fn general_position_witness(points: &[&Point]) -> Option<Vec<usize>> {
    let Some(first) = points.first() else {
        return None;
    };
    let d = first.dim();
    let n = points.len();
    if n <= d + 1 {
        if affinely_independent(points) {
            return None;
        }
        return Some((0..n).collect());
    }
    // Every dependent subset of size <= d + 1 extends to a dependent (d+1)-subset.
    (0..n).into_par_iter().find_map_first(|first_idx| {
        let rest = n - first_idx - 1;
        let mut found = None;
        for_each_combination(rest, d, |tail| {
            let mut sub = Vec::with_capacity(d + 1);
            sub.push(points[first_idx]);
            sub.extend(tail.iter().map(|&t| points[first_idx + 1 + t]));
            if orientation_unchecked(&sub).is_zero() {
                let mut ids = vec![first_idx];
                ids.extend(tail.iter().map(|&t| first_idx + 1 + t));
                found = Some(ids);
                return false;
            }
            true
        });
        found
    })
}

pub fn points_in_general_position(points: &[&Point]) -> bool {
    general_position_witness(points).is_none()
}

pub fn in_general_position(set: &LabeledPointSet) -> bool {
    let pts: Vec<&Point> = set.points().collect();
    points_in_general_position(&pts)
}

/// Whether the affine hulls of the given point groups share a common point.
pub fn affine_hulls_meet(parts: &[Vec<&Point>]) -> bool {
    let Some(d) = parts.iter().flatten().next().map(|p| p.dim()) else {
        return true;
    };
    if parts.iter().any(Vec::is_empty) {
        return false;
    }
    // Unknowns: x (d entries) then one weight per point in each part.
    let weights: usize = parts.iter().map(Vec::len).sum();
    let cols = d + weights;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut offset = d;
    for part in parts {
        for j in 0..d {
            let mut row = vec![Rational::zero(); cols];
            row[j] = Rational::one();
            for (l, q) in part.iter().enumerate() {
                row[offset + l] = -q.coords()[j].clone();
            }
            a.push(row);
            b.push(Rational::zero());
        }
        let mut row = vec![Rational::zero(); cols];
        for l in 0..part.len() {
            row[offset + l] = Rational::one();
        }
        a.push(row);
        b.push(Rational::one());
        offset += part.len();
    }
    solve_any(&a, &b).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConditionG {
    Satisfied,
    /// Some `<= d + 1` points are affinely dependent.
    NotGeneralPosition {
        witness: Vec<PointId>,
    },
    /// `d + 1` disjoint groups whose affine hulls meet.
    Violated {
        witness: Vec<Vec<PointId>>,
    },
    /// The tuple cap was reached before a decision.
    Indeterminate {
        examined: u64,
    },
}

impl ConditionG {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ConditionG::Satisfied)
    }
}

/// Decides condition (G) for the union of the colors.
///
/// When the union has at least `d(d+1)` points every family of small disjoint
/// groups can be enlarged to `d`-point groups, which only enlarges the hulls,
/// so it suffices to look for `d + 1` disjoint spanned hyperplanes through a
/// common point. Intersections of `d`-tuples are hashed to find them.
/// Smaller sets are enumerated directly.
pub fn satisfies_condition_g(set: &LabeledPointSet, cap: u64) -> ConditionG {
    let ids: Vec<PointId> = set.ids().collect();
    let pts: Vec<&Point> = ids.iter().map(|&id| set.point(id)).collect();
    let verdict = condition_g_points(&pts, set.dim(), cap);
    map_ids(verdict, &ids)
}

fn map_ids(v: ConditionGRaw, ids: &[PointId]) -> ConditionG {
    match v {
        ConditionGRaw::Satisfied => ConditionG::Satisfied,
        ConditionGRaw::NotGp(w) => ConditionG::NotGeneralPosition {
            witness: w.into_iter().map(|i| ids[i]).collect(),
        },
        ConditionGRaw::Violated(groups) => ConditionG::Violated {
            witness: groups
                .into_iter()
                .map(|g| g.into_iter().map(|i| ids[i]).collect())
                .collect(),
        },
        ConditionGRaw::Indeterminate(n) => ConditionG::Indeterminate { examined: n },
    }
}

pub(crate) enum ConditionGRaw {
    Satisfied,
    NotGp(Vec<usize>),
    Violated(Vec<Vec<usize>>),
    Indeterminate(u64),
}

pub(crate) fn condition_g_points(pts: &[&Point], d: usize, cap: u64) -> ConditionGRaw {
    if let Some(w) = general_position_witness(pts) {
        return ConditionGRaw::NotGp(w);
    }
    if pts.len() >= d * (d + 1) {
        condition_g_hashed(pts, d, cap)
    } else {
        condition_g_brute(pts, d, cap)
    }
}

/// Reference enumeration over all families of `d + 1` pairwise disjoint
/// groups of size `1..=d`.
pub(crate) fn condition_g_brute(pts: &[&Point], d: usize, cap: u64) -> ConditionGRaw {
    let n = pts.len();
    let mut examined = 0u64;
    let mut used = vec![false; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut result = None;
    // Groups are generated in canonical order (by their smallest element) so
    // that each unordered family is visited once.
    fn rec(
        pts: &[&Point],
        d: usize,
        cap: u64,
        used: &mut Vec<bool>,
        groups: &mut Vec<Vec<usize>>,
        examined: &mut u64,
        result: &mut Option<ConditionGRaw>,
    ) {
        if result.is_some() {
            return;
        }
        if groups.len() == d + 1 {
            *examined += 1;
            if *examined > cap {
                *result = Some(ConditionGRaw::Indeterminate(cap));
                return;
            }
            let parts: Vec<Vec<&Point>> = groups
                .iter()
                .map(|g| g.iter().map(|&i| pts[i]).collect())
                .collect();
            if affine_hulls_meet(&parts) {
                *result = Some(ConditionGRaw::Violated(groups.clone()));
            }
            return;
        }
        let min_start = groups.last().map_or(0, |g| g[0] + 1);
        let n = pts.len();
        for start in min_start..n {
            if used[start] {
                continue;
            }
            let free: Vec<usize> = (start + 1..n).filter(|&i| !used[i]).collect();
            for extra in 0..d.min(free.len() + 1) {
                for_each_combination(free.len(), extra, |sel| {
                    let mut g = vec![start];
                    g.extend(sel.iter().map(|&s| free[s]));
                    for &i in &g {
                        used[i] = true;
                    }
                    groups.push(g);
                    rec(pts, d, cap, used, groups, examined, result);
                    let g = groups.pop().expect("pushed above");
                    for &i in &g {
                        used[i] = false;
                    }
                    result.is_none()
                });
                if result.is_some() {
                    return;
                }
            }
        }
    }
    rec(
        pts,
        d,
        cap,
        &mut used,
        &mut groups,
        &mut examined,
        &mut result,
    );
    result.unwrap_or(ConditionGRaw::Satisfied)
}

fn condition_g_hashed(pts: &[&Point], d: usize, cap: u64) -> ConditionGRaw {
    let n = pts.len();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for_each_combination(n, d, |s| {
        subsets.push(s.to_vec());
        true
    });
    if d == 1 {
        // Hyperplanes are the points themselves; general position already
        // makes them distinct, so no two disjoint singletons meet.
        return ConditionGRaw::Satisfied;
    }
    let planes: Vec<_> = subsets
        .iter()
        .map(|s| {
            let q: Vec<&Point> = s.iter().map(|&i| pts[i]).collect();
            spanned_hyperplane(&q).expect("general position")
        })
        .collect();
    // Unordered families of d pairwise disjoint d-subsets.
    let estimate = (0..d * d).map(|i| (n - i) as f64).product::<f64>()
        / (1..=d)
            .map(|i| i as f64)
            .product::<f64>()
            .powi(d as i32 + 1);
    if estimate > cap as f64 {
        return ConditionGRaw::Indeterminate(0);
    }
    if d == 2 {
        return condition_g_planar(pts, &subsets, &planes);
    }
    let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|x| !b.contains(x));
    let mut incidences: HashMap<Vec<Rational>, HashSet<usize>> = HashMap::new();
    let mut degenerate: Vec<Vec<usize>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    fn rec_tuples(
        start: usize,
        d: usize,
        subsets: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        disjoint: &dyn Fn(&[usize], &[usize]) -> bool,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == d {
            visit(chosen);
            return;
        }
        for k in start..subsets.len() {
            if chosen.iter().all(|&c| disjoint(&subsets[c], &subsets[k])) {
                chosen.push(k);
                rec_tuples(k + 1, d, subsets, chosen, disjoint, visit);
                chosen.pop();
            }
        }
    }
    let mut visit = |tuple: &[usize]| {
        let a: Vec<Vec<Rational>> = tuple.iter().map(|&k| planes[k].normal().to_vec()).collect();
        let b: Vec<Rational> = tuple.iter().map(|&k| planes[k].offset().clone()).collect();
        match super::linalg::solve_unique(&a, &b) {
            Some(x) => {
                incidences
                    .entry(x)
                    .or_default()
                    .extend(tuple.iter().copied());
            }
            None => degenerate.push(tuple.to_vec()),
        }
    };
    rec_tuples(0, d, &subsets, &mut chosen, &disjoint, &mut visit);

    let mut keys: Vec<&Vec<Rational>> = incidences
        .iter()
        .filter(|(_, hs)| hs.len() > d)
        .map(|(k, _)| k)
        .collect();
    keys.sort();
    for key in keys {
        let mut hs: Vec<usize> = incidences[key].iter().copied().collect();
        hs.sort_unstable();
        if let Some(family) = disjoint_family(&hs, &subsets, d + 1) {
            return ConditionGRaw::Violated(
                family.into_iter().map(|k| subsets[k].clone()).collect(),
            );
        }
    }
    for tuple in degenerate {
        for k in 0..subsets.len() {
            if tuple.iter().all(|&c| disjoint(&subsets[c], &subsets[k])) {
                let mut family = tuple.clone();
                family.push(k);
                let parts: Vec<Vec<&Point>> = family
                    .iter()
                    .map(|&f| subsets[f].iter().map(|&i| pts[i]).collect())
                    .collect();
                if affine_hulls_meet(&parts) {
                    return ConditionGRaw::Violated(
                        family.into_iter().map(|f| subsets[f].clone()).collect(),
                    );
                }
            }
        }
    }
    ConditionGRaw::Satisfied
}

/// Three pairwise disjoint lines through one point. Crossings with every
/// later disjoint line are sorted along each line in floating point, and
/// nearly coincident ones are confirmed exactly.
fn condition_g_planar(
    pts: &[&Point],
    subsets: &[Vec<usize>],
    planes: &[OrientedHyperplane],
) -> ConditionGRaw {
    let f: Vec<Vec<f64>> = pts.iter().map(|p| p.to_f64()).collect();
    let lines: Vec<([f64; 2], f64)> = planes
        .iter()
        .map(|h| {
            let n = h.normal();
            ([to_f64(&n[0]), to_f64(&n[1])], to_f64(h.offset()))
        })
        .collect();
    let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|x| !b.contains(x));
    let mut crossings: Vec<(f64, usize)> = Vec::new();
    for (k, s) in subsets.iter().enumerate() {
        let (a, b) = (&f[s[0]], &f[s[1]]);
        let dir = [b[0] - a[0], b[1] - a[1]];
        crossings.clear();
        for l in k + 1..subsets.len() {
            if !disjoint(s, &subsets[l]) {
                continue;
            }
            let (n, c) = &lines[l];
            let denom = n[0] * dir[0] + n[1] * dir[1];
            if denom != 0.0 {
                crossings.push(((c - n[0] * a[0] - n[1] * a[1]) / denom, l));
            }
        }
        crossings.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (idx, &(t, l)) in crossings.iter().enumerate() {
            for &(u, m) in &crossings[idx + 1..] {
                if u - t > 1e-7 * (1.0 + t.abs() + u.abs()) {
                    break;
                }
                if !disjoint(&subsets[l], &subsets[m]) {
                    continue;
                }
                let family = [k, l, m];
                let parts: Vec<Vec<&Point>> = family
                    .iter()
                    .map(|&g| subsets[g].iter().map(|&i| pts[i]).collect())
                    .collect();
                if affine_hulls_meet(&parts) {
                    return ConditionGRaw::Violated(
                        family.iter().map(|&g| subsets[g].clone()).collect(),
                    );
                }
            }
        }
    }
    ConditionGRaw::Satisfied
}

fn disjoint_family(
    candidates: &[usize],
    subsets: &[Vec<usize>],
    want: usize,
) -> Option<Vec<usize>> {
    fn rec(
        candidates: &[usize],
        subsets: &[Vec<usize>],
        want: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == want {
            return true;
        }
        for pos in from..candidates.len() {
            let k = candidates[pos];
            if chosen
                .iter()
                .all(|&c| subsets[c].iter().all(|x| !subsets[k].contains(x)))
            {
                chosen.push(k);
                if rec(candidates, subsets, want, pos + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    rec(candidates, subsets, want, 0, &mut chosen).then_some(chosen)
}
