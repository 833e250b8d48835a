use num::{One, Signed, Zero};

use super::lp::{LinearProgram, LpOutcome, Relation};
use super::point::{OrientedHyperplane, Point};
use super::GeometryError;
use crate::rational::{small, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Separation {
    /// `normal·p < offset < normal·s` for every `s`.
    Separated(OrientedHyperplane),
    /// `p` lies in the closed convex hull of the set.
    Infeasible,
}

impl Separation {
    pub fn hyperplane(&self) -> Option<&OrientedHyperplane> {
        match self {
            Separation::Separated(h) => Some(h),
            Separation::Infeasible => None,
        }
    }
}

/// Maximum-margin strict separation of `p` from the finite set `set`.
///
/// Variables are `u ∈ [0,2]^d` (normal `a = u - 1`), a gap `c >= 0` and the
/// margin `t ∈ [0,1]`, with `a·(s - p) >= c + t` for all `s` and `c >= t`.
/// A positive optimum gives the hyperplane `a·x = a·p + c`.
pub fn strict_separation(p: &Point, set: &[&Point]) -> Result<Separation, GeometryError> {
    if set.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let d = p.dim();
    for s in set {
        s.check_dim(d)?;
    }
    let (u_c, t_c) = (d, d + 1);
    let mut lp = LinearProgram::new(d + 2);
    lp.objective[t_c] = Rational::one();
    for s in set {
        let diff = s.sub(p);
        let mut coeffs = diff.clone();
        coeffs.push(-Rational::one());
        coeffs.push(-Rational::one());
        let rhs: Rational = diff.iter().sum();
        lp.constrain(coeffs, Relation::Ge, rhs);
    }
    let mut gap = vec![Rational::zero(); d + 2];
    gap[u_c] = Rational::one();
    gap[t_c] = -Rational::one();
    lp.constrain(gap, Relation::Ge, Rational::zero());
    for j in 0..d {
        let mut bound = vec![Rational::zero(); d + 2];
        bound[j] = Rational::one();
        lp.constrain(bound, Relation::Le, small(2));
    }
    let mut t_bound = vec![Rational::zero(); d + 2];
    t_bound[t_c] = Rational::one();
    lp.constrain(t_bound, Relation::Le, Rational::one());

    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let normal: Vec<Rational> = x[..d].iter().map(|u| u - Rational::one()).collect();
            let ap: Rational = normal.iter().zip(p.coords()).map(|(a, b)| a * b).sum();
            let offset = ap + &x[u_c];
            Ok(Separation::Separated(OrientedHyperplane::new(
                normal, offset,
            )?))
        }
        LpOutcome::Optimal { .. } => Ok(Separation::Infeasible),
        other => unreachable!("bounded feasible program returned {other:?}"),
    }
}

/// Checks the strict-separation contract of a hyperplane.
pub fn separates_strictly(h: &OrientedHyperplane, p: &Point, set: &[&Point]) -> bool {
    h.eval(p).is_negative() && set.iter().all(|s| h.eval(s).is_positive())
}
