//! Exact two-phase simplex method on a dense rational tableau.
//!
//! Pivoting follows Bland's rule (lowest eligible index for both the entering
//! and the leaving variable), which rules out cycling.

use num::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective, self.num_vars)
    }

    /// Feasibility only; returns a feasible point if one exists.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let mut t = Tableau::build(self);
        if !t.phase_one() {
            return None;
        }
        Some(t.extract(self.num_vars))
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Total structural + slack + artificial columns (the rhs is one past this).
    width: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let mut slack_count = 0;
        let mut art_count = 0;
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), flipped, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        for (_, rel, _) in &normalized {
            match rel {
                Relation::Le => slack_count += 1,
                Relation::Ge => {
                    slack_count += 1;
                    art_count += 1
                }
                Relation::Eq => art_count += 1,
            }
        }
        let artificial_start = n + slack_count;
        let width = artificial_start + art_count;
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut s, mut a) = (n, artificial_start);
        for (coeffs, rel, rhs) in normalized {
            let mut row = coeffs;
            row.resize(width + 1, Rational::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rational::one();
                    s += 1;
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rational::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            width,
            artificial_start,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns `< limit`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> bool {
        loop {
            // Reduced cost z_j - c_j; enter on the first negative one.
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: Rational = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .filter(|(row, _)| !row[j].is_zero())
                    .map(|(row, &b)| &cost[b] * &row[j])
                    .sum();
                z < cost[j]
            });
            let Some(c) = entering else {
                return true;
            };
            let rhs = self.width;
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn phase_one(&mut self) -> bool {
        if self.artificial_start == self.width {
            return true;
        }
        let mut cost = vec![Rational::zero(); self.width];
        for c in cost[self.artificial_start..].iter_mut() {
            *c = -Rational::one();
        }
        self.optimize(&cost, self.width);
        let infeasibility: Rational = self
            .rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| b >= self.artificial_start)
            .map(|(row, _)| row[self.width].clone())
            .sum();
        if !infeasibility.is_zero() {
            return false;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                match (0..self.artificial_start).find(|&c| !self.rows[r][c].is_zero()) {
                    Some(c) => {
                        self.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        true
    }

    fn extract(&self, num_vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < num_vars {
                x[b] = row[self.width].clone();
            }
        }
        x
    }

    fn run(mut self, objective: &[Rational], num_vars: usize) -> LpOutcome {
        if !self.phase_one() {
            return LpOutcome::Infeasible;
        }
        let mut cost = vec![Rational::zero(); self.width];
        cost[..num_vars].clone_from_slice(objective);
        if !self.optimize(&cost, self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let x = self.extract(num_vars);
        let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { x, value }
    }
}
