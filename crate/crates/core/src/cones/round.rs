//! Round cones, the cylinder bound on their polars, and the spherical
//! Blaschke–Santaló comparison for simplicial cones.

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use std::f64::consts::FRAC_PI_2;

use super::bounds::ball_volume;
use super::polar::{polar_cone, restricted_volume_mc};
use super::sampling::{self, gaussian, sub_seed, Estimate};
use super::{ConeError, SimplicialCone};

/// Fraction of the unit sphere in R^d within angle `alpha` of a fixed axis.
pub fn cap_fraction(d: usize, alpha: f64) -> f64 {
    assert!(d >= 2, "spherical caps need d >= 2");
    if alpha <= 0.0 {
        return 0.0;
    }
    if alpha >= std::f64::consts::PI {
        return 1.0;
    }
    if alpha > FRAC_PI_2 {
        return 1.0 - cap_fraction(d, std::f64::consts::PI - alpha);
    }
    let s = alpha.sin();
    0.5 * beta_reg((d as f64 - 1.0) / 2.0, 0.5, s * s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundConeBound {
    /// Half-angle of the round cone with the requested restricted volume.
    pub half_angle: f64,
    /// Distance from the origin to the hyperplane cutting its spherical cap.
    pub gamma: f64,
    /// `γ^(d-1) β_(d-1)`: volume of the cylinder containing the polar's ball part.
    pub bound: f64,
    /// Restricted volume of the polar round cone, from the cap formula.
    pub polar_volume: f64,
}

/// Cylinder bound on the restricted volume of the polar of a round cone
/// whose own restricted volume is `w`.
pub fn round_cone_polar_volume_bound(d: usize, w: f64) -> Result<RoundConeBound, ConeError> {
    let beta = ball_volume(d);
    if d < 2 || !(w > 0.0 && w < beta / 2.0) {
        return Err(ConeError::VolumeOutOfRange { w, max: beta / 2.0 });
    }
    let target = w / beta;
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if cap_fraction(d, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let gamma = alpha.cos();
    Ok(RoundConeBound {
        half_angle: alpha,
        gamma,
        bound: gamma.powi(d as i32 - 1) * ball_volume(d - 1),
        polar_volume: beta * cap_fraction(d, FRAC_PI_2 - alpha),
    })
}

/// MC restricted volume of the round cone with the given half-angle.
pub fn round_cone_volume_mc(d: usize, half_angle: f64, samples: u64, seed: u64) -> Estimate {
    let c = half_angle.cos();
    sampling::fraction(samples, seed, |rng| {
        let x = gaussian(rng, d);
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x[0] >= c * n
    })
    .scaled(ball_volume(d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SantaloAudit {
    pub volume: Estimate,
    pub polar_volume: Estimate,
    pub round_polar_volume: Estimate,
    pub cylinder_bound: f64,
    /// `Vol'(C*) <= Vol'(round polar) + 3σ`.
    pub pass_round: bool,
    /// `Vol'(C*) <= cylinder bound + 3σ`.
    pub pass_cylinder: bool,
}

/// Compares the polar of a simplicial cone with the polar of the round cone
/// of the same restricted volume; all three volumes are measured by MC.
pub fn blaschke_santalo_audit(
    cone: &SimplicialCone,
    samples: u64,
    seed: u64,
) -> Result<SantaloAudit, ConeError> {
    let d = cone.dim();
    let volume = restricted_volume_mc(cone, samples, sub_seed(seed, 0))?;
    let polar = polar_cone(cone)?;
    let polar_volume = restricted_volume_mc(&polar, samples, sub_seed(seed, 1))?;
    let round = round_cone_polar_volume_bound(d, volume.mean)?;
    let round_polar_volume =
        round_cone_volume_mc(d, FRAC_PI_2 - round.half_angle, samples, sub_seed(seed, 2));
    let sigma = (polar_volume.std_error.powi(2) + round_polar_volume.std_error.powi(2)).sqrt();
    Ok(SantaloAudit {
        pass_round: polar_volume.mean <= round_polar_volume.mean + 3.0 * sigma,
        pass_cylinder: polar_volume.mean <= round.bound + 3.0 * polar_volume.std_error,
        volume,
        polar_volume,
        round_polar_volume,
        cylinder_bound: round.bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn cap_fraction_closed_forms() {
        // In R^3 the cap area fraction is (1 - cos α)/2.
        for a in [0.1, 0.7, 1.2, 2.5] {
            assert_relative_eq!(
                cap_fraction(3, a),
                (1.0 - f64::cos(a)) / 2.0,
                epsilon = 1e-12
            );
        }
        // In R^2 it is α/π.
        assert_relative_eq!(cap_fraction(2, 0.9), 0.9 / PI, epsilon = 1e-12);
    }

    #[test]
    fn quarter_ball_in_r3() {
        let b = round_cone_polar_volume_bound(3, ball_volume(3) / 4.0).unwrap();
        assert_relative_eq!(b.gamma, 0.5, epsilon = 1e-9);
        assert_relative_eq!(b.bound, PI / 4.0, epsilon = 1e-8);
        assert!(b.polar_volume <= b.bound);
        let mc = round_cone_volume_mc(3, b.half_angle, 200_000, 1);
        assert!((mc.mean - ball_volume(3) / 4.0).abs() < 4.0 * mc.std_error);
    }

    #[test]
    fn bound_is_decreasing_and_vanishes_at_half_ball() {
        let beta = ball_volume(3);
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let w = beta / 2.0 * k as f64 / 50.0;
            let b = round_cone_polar_volume_bound(3, w).unwrap().bound;
            assert!(b < prev);
            prev = b;
        }
        let near = round_cone_polar_volume_bound(3, beta / 2.0 - 1e-9).unwrap();
        assert!(near.bound < 1e-6);
    }

    #[test]
    fn range_is_enforced() {
        assert!(round_cone_polar_volume_bound(3, 0.0).is_err());
        assert!(round_cone_polar_volume_bound(3, ball_volume(3)).is_err());
    }

    #[test]
    fn orthant_audit_passes() {
        let o = SimplicialCone::at_origin(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let a = blaschke_santalo_audit(&o, 100_000, 9).unwrap();
        assert!(a.pass_round && a.pass_cylinder, "{a:?}");
    }
}
