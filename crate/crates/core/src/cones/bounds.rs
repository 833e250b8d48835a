//! Closed-form constants: ball volumes, the msa upper bound `u(d)`, `g(d)`,
//! the asymptotic regular-simplex solid angle, and the rainbow depth constant.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

/// Volume of the unit ball in R^d.
pub fn ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    std::f64::consts::PI.powf(h) / gamma(h + 1.0)
}

/// Explicit upper bound on the minimum solid angle of a d-simplex,
/// `min((2 ln(d+1)/d)^((d-1)/2) · d/(2π), 1/2)`.
///
/// In dimension 1 each vertex of a segment sees exactly half of the line, so
/// the value is 1/2 there; the closed form is only meaningful for `d >= 2`.
pub fn msa_upper_bound(d: usize) -> f64 {
    msa_bound_formula(d).map_or(0.5, |v| v.min(0.5))
}

/// The unclamped closed form, `None` for `d < 2`.
pub fn msa_bound_formula(d: usize) -> Option<f64> {
    if d < 2 {
        return None;
    }
    let df = d as f64;
    let base = 2.0 * (df + 1.0).ln() / df;
    Some(base.powf((df - 1.0) / 2.0) * df / (2.0 * std::f64::consts::PI))
}

/// Leading term of the solid angle at a vertex of the regular d-simplex.
pub fn rho_d_asymptotic(d: usize) -> f64 {
    let df = d as f64;
    let e = std::f64::consts::E;
    let pi = std::f64::consts::PI;
    // Evaluated in logs so that large d does not overflow.
    let ln = 0.5 * (df + 1.0).ln() - 0.5 * 2f64.ln() - 1.0 - df * 2f64.ln()
        + (df / 2.0) * (2.0 * e / (pi * df)).ln();
    ln.exp()
}

/// `k'_d = 2d / ((d+1)! (d+1))`.
pub fn rainbow_depth_constant(d: usize) -> f64 {
    let df = d as f64;
    2.0 * df / (gamma(df + 2.0) * (df + 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub dim: usize,
    pub u: f64,
    pub g: f64,
    /// The lower bound on Pach's constant is `2^-(2^e)` with this `e = d^2 + 3d`.
    pub lower_bound_exponent: u64,
    pub rho_d_asymptotic: f64,
    /// True when `u` is the trivial value 1/2 rather than the closed form.
    pub clamped: bool,
}

impl BoundTable {
    pub fn for_dim(d: usize) -> Self {
        let u = msa_upper_bound(d);
        BoundTable {
            dim: d,
            u,
            g: (d as f64).exp2() * u,
            lower_bound_exponent: (d * d + 3 * d) as u64,
            rho_d_asymptotic: rho_d_asymptotic(d),
            clamped: msa_bound_formula(d).is_none_or(|v| v >= 0.5),
        }
    }

    pub const CSV_HEADER: &'static str =
        "d,u(d),g(d),clamped,lower_bound_exponent,rho_d_asymptotic";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.dim,
            self.u,
            self.g,
            self.clamped,
            self.lower_bound_exponent,
            self.rho_d_asymptotic
        )
    }
}
