//! Rainbow simplices and the hypergraph of those containing a fixed point.

use rayon::prelude::*;

use crate::geometry::containment::in_convex_hull;
use crate::geometry::predicates::orientation_unchecked;
use crate::geometry::{LabeledPointSet, Mode, Point, PointId, Sign};

/// Mixed-radix indexing of tuples `(t_0, ..., t_d)` with `t_i < sizes[i]`;
/// the first coordinate is the most significant digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radix {
    sizes: Vec<usize>,
}

impl Radix {
    pub fn new(sizes: Vec<usize>) -> Self {
        Radix { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&t, &n)| acc * n + t)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0; self.sizes.len()];
        for (k, &n) in self.sizes.iter().enumerate().rev() {
            digits[k] = idx % n;
            idx /= n;
        }
        digits
    }

    /// Index of the tuple with digit `skip` removed, in the radix of the
    /// remaining coordinates.
    pub fn encode_without(&self, digits: &[usize], skip: usize) -> usize {
        digits
            .iter()
            .zip(&self.sizes)
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .fold(0, |acc, (_, (&t, &n))| acc * n + t)
    }

    pub fn without(&self, skip: usize) -> Radix {
        Radix::new(
            self.sizes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &n)| n)
                .collect(),
        )
    }
}

/// All rainbow simplices of a family of point lists, with each simplex's
/// orientation computed once so that containment of many query points is
/// cheap: only the `Σ_i ∏_{j≠i} n_j` facet orientations depend on the query.
pub struct RainbowSimplices<'a> {
    colors: Vec<Vec<&'a Point>>,
    radix: Radix,
    base: Vec<Sign>,
}

impl<'a> RainbowSimplices<'a> {
    pub fn new(colors: Vec<Vec<&'a Point>>) -> Self {
        let radix = Radix::new(colors.iter().map(Vec::len).collect());
        let base = (0..radix.len())
            .into_par_iter()
            .map(|idx| {
                let digits = radix.decode(idx);
                let verts: Vec<&Point> = digits
                    .iter()
                    .enumerate()
                    .map(|(c, &t)| colors[c][t])
                    .collect();
                orientation_unchecked(&verts)
            })
            .collect();
        RainbowSimplices {
            colors,
            radix,
            base,
        }
    }

    pub fn from_set(set: &'a LabeledPointSet) -> Self {
        RainbowSimplices::new(set.colors().iter().map(|c| c.iter().collect()).collect())
    }

    pub fn radix(&self) -> &Radix {
        &self.radix
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn vertices(&self, idx: usize) -> Vec<&'a Point> {
        self.radix
            .decode(idx)
            .iter()
            .enumerate()
            .map(|(c, &t)| self.colors[c][t])
            .collect()
    }

    pub fn orientation(&self, idx: usize) -> Sign {
        self.base[idx]
    }

    fn facet_signs(&self, p: &Point) -> Vec<Vec<Sign>> {
        let k = self.colors.len();
        (0..k)
            .map(|i| {
                let sub = self.radix.without(i);
                (0..sub.len())
                    .into_par_iter()
                    .map(|f| {
                        let digits = sub.decode(f);
                        let mut verts: Vec<&Point> = Vec::with_capacity(k);
                        let mut it = digits.iter();
                        for c in 0..k {
                            if c == i {
                                verts.push(p);
                            } else {
                                let t = *it.next().expect("digit per other color");
                                verts.push(self.colors[c][t]);
                            }
                        }
                        orientation_unchecked(&verts)
                    })
                    .collect()
            })
            .collect()
    }

    /// Containment bit per rainbow simplex.
    pub fn containment(&self, p: &Point, mode: Mode) -> Vec<bool> {
        let facets = self.facet_signs(p);
        (0..self.len())
            .into_par_iter()
            .map(|idx| {
                let base = self.base[idx];
                let digits = self.radix.decode(idx);
                if base.is_zero() {
                    return mode == Mode::Closed && in_convex_hull(p, &self.vertices(idx));
                }
                (0..digits.len()).all(|i| {
                    let s = facets[i][self.radix.encode_without(&digits, i)];
                    s == base || (mode == Mode::Closed && s.is_zero())
                })
            })
            .collect()
    }

    pub fn count(&self, p: &Point, mode: Mode) -> u64 {
        self.containment(p, mode).iter().filter(|&&b| b).count() as u64
    }
}

/// The (d+1)-partite hypergraph whose edges are the rainbow simplices (one
/// vertex per part) containing the anchor `p` in their closed hull.
#[derive(Clone, Debug, PartialEq)]
pub struct RainbowHypergraph {
    parts: Vec<Vec<PointId>>,
    p: Point,
    radix: Radix,
    edges: Vec<bool>,
    edge_count: u64,
}

impl RainbowHypergraph {
    /// `parts[i]` lists indices into color `i` of `set`.
    pub fn build(set: &LabeledPointSet, parts: Vec<Vec<usize>>, p: &Point) -> Self {
        let colors: Vec<Vec<&Point>> = parts
            .iter()
            .enumerate()
            .map(|(c, idx)| idx.iter().map(|&t| &set.color(c)[t]).collect())
            .collect();
        let rs = RainbowSimplices::new(colors);
        let edges = rs.containment(p, Mode::Closed);
        let edge_count = edges.iter().filter(|&&b| b).count() as u64;
        RainbowHypergraph {
            parts: parts
                .iter()
                .enumerate()
                .map(|(color, idx)| idx.iter().map(|&index| PointId { color, index }).collect())
                .collect(),
            p: p.clone(),
            radix: rs.radix().clone(),
            edges,
            edge_count,
        }
    }

    /// Direct construction from an incidence predicate over positions; used
    /// for hand-built hypergraphs.
    pub fn from_predicate(sizes: Vec<usize>, p: Point, edge: impl Fn(&[usize]) -> bool) -> Self {
        let radix = Radix::new(sizes.clone());
        let edges: Vec<bool> = (0..radix.len()).map(|i| edge(&radix.decode(i))).collect();
        let edge_count = edges.iter().filter(|&&b| b).count() as u64;
        RainbowHypergraph {
            parts: sizes
                .iter()
                .enumerate()
                .map(|(color, &n)| (0..n).map(|index| PointId { color, index }).collect())
                .collect(),
            p,
            radix,
            edges,
            edge_count,
        }
    }

    pub fn parts(&self) -> &[Vec<PointId>] {
        &self.parts
    }

    pub fn anchor(&self) -> &Point {
        &self.p
    }

    pub fn sizes(&self) -> &[usize] {
        self.radix.sizes()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn is_edge(&self, positions: &[usize]) -> bool {
        self.edges[self.radix.encode(positions)]
    }

    pub fn density(&self) -> f64 {
        let total = self.radix.len() as u64;
        if total == 0 {
            0.0
        } else {
            self.edge_count as f64 / total as f64
        }
    }

    /// Number of edges inside the box `subsets[0] × ... × subsets[d]` (positions).
    pub fn box_edges(&self, subsets: &[Vec<usize>]) -> u64 {
        let radix = &self.radix;
        let inner = Radix::new(subsets.iter().map(Vec::len).collect());
        (0..inner.len())
            .filter(|&i| {
                let digits = inner.decode(i);
                let pos: Vec<usize> = digits.iter().zip(subsets).map(|(&t, s)| s[t]).collect();
                self.edges[radix.encode(&pos)]
            })
            .count() as u64
    }

    pub fn box_density(&self, subsets: &[Vec<usize>]) -> f64 {
        let size: u64 = subsets.iter().map(|s| s.len() as u64).product();
        if size == 0 {
            0.0
        } else {
            self.box_edges(subsets) as f64 / size as f64
        }
    }
}
