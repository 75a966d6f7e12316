//! Squeezing-angle policies.
//!
//! With coherent sums P (shot) and R (back-action), squeezed noise is
//! ½|P cosθ − R sinθ|²e^{−2r} + ½|P sinθ + R cosθ|²e^{2r} + θ-independent terms.

use std::f64::consts::FRAC_PI_2;

use super::noise::{coherent_sums, CoherentSums};
use super::ArrayConfig;
use crate::error::Result;
use crate::strategy::{required, Registry, StrategyParams};

pub trait AnglePolicy: Send + Sync {
    fn name(&self) -> &'static str;

    /// Squeezing angle θ for the given sums and squeezing strength.
    fn angle(&self, sums: &CoherentSums, r: f64) -> f64;
}

/// Same θ at every frequency.
#[derive(Debug, Clone, Copy)]
pub struct FixedAngle(pub f64);

impl AnglePolicy for FixedAngle {
    fn name(&self) -> &'static str {
        "fixed"
    }

    fn angle(&self, _: &CoherentSums, _: f64) -> f64 {
        self.0
    }
}

/// tanθ = −s·|R|/|P_re| with s the sign of Re(R·P_re*), where P_re keeps only
/// the reactive part (Ω² − ω²)/Ω of 1/χ. θ → −π/2 on resonance.
#[derive(Debug, Clone, Copy)]
pub struct AntiSqueeze;

impl AnglePolicy for AntiSqueeze {
    fn name(&self) -> &'static str {
        "anti-squeeze"
    }

    fn angle(&self, sums: &CoherentSums, _: f64) -> f64 {
        let denom = sums.shot_reactive.norm();
        if denom == 0.0 {
            return -FRAC_PI_2;
        }
        let sign = if (sums.back_action * sums.shot_reactive.conj()).re < 0.0 {
            -1.0
        } else {
            1.0
        };
        (-sign * sums.back_action.norm() / denom).atan()
    }
}

/// tanθ = −|R|/|P_re|, always in (−π/2, 0]. Matches [`AntiSqueeze`] below
/// every resonance and has the wrong sign above.
#[derive(Debug, Clone, Copy)]
pub struct AntiSqueezeMagnitude;

impl AnglePolicy for AntiSqueezeMagnitude {
    fn name(&self) -> &'static str {
        "anti-squeeze-magnitude"
    }

    fn angle(&self, sums: &CoherentSums, _: f64) -> f64 {
        let denom = sums.shot_reactive.norm();
        if denom == 0.0 {
            return -FRAC_PI_2;
        }
        (-sums.back_action.norm() / denom).atan()
    }
}

/// Minimizes a·|P c − R s|² + b·|P s + R c|² over θ in closed form.
fn minimize_quadratic(sums: &CoherentSums, a: f64, b: f64) -> f64 {
    let p2 = sums.shot.norm_sqr();
    let r2 = sums.back_action.norm_sqr();
    let x = (sums.shot.conj() * sums.back_action).re * (b - a);
    let big_a = a * p2 + b * r2;
    let big_b = a * r2 + b * p2;
    // (A+B)/2 + (A−B)/2·cos2θ + X·sin2θ
    let two_theta = (-x).atan2(-0.5 * (big_a - big_b));
    let theta = 0.5 * two_theta;
    // fold into (−π/2, π/2]
    if theta <= -FRAC_PI_2 {
        theta + std::f64::consts::PI
    } else {
        theta
    }
}

/// Exact minimizer of the e^{2r} coefficient |P sinθ + R cosθ|².
#[derive(Debug, Clone, Copy)]
pub struct AntiSqueezeExact;

impl AnglePolicy for AntiSqueezeExact {
    fn name(&self) -> &'static str {
        "anti-squeeze-exact"
    }

    fn angle(&self, sums: &CoherentSums, _: f64) -> f64 {
        minimize_quadratic(sums, 0.0, 1.0)
    }
}

/// Minimizes the total noise, hence maximizes the SNR, at each frequency.
#[derive(Debug, Clone, Copy)]
pub struct SnrOptimal;

impl AnglePolicy for SnrOptimal {
    fn name(&self) -> &'static str {
        "snr-optimal"
    }

    fn angle(&self, sums: &CoherentSums, r: f64) -> f64 {
        minimize_quadratic(sums, 0.5 * (-2.0 * r).exp(), 0.5 * (2.0 * r).exp())
    }
}

/// θ*_ω from the reactive anti-squeezing condition.
pub fn optimal_squeezing_angle(cfg: &ArrayConfig, omega: f64) -> Result<f64> {
    Ok(AntiSqueeze.angle(&coherent_sums(cfg, omega)?, 0.0))
}

pub fn angle_policies() -> Registry<dyn AnglePolicy> {
    let mut reg: Registry<dyn AnglePolicy> = Registry::new("angle");
    reg.register("fixed", |p: &StrategyParams| Ok(Box::new(FixedAngle(required(p, "theta_rad")?))))
        .register("anti-squeeze", |_| Ok(Box::new(AntiSqueeze)))
        .register("anti-squeeze-magnitude", |_| Ok(Box::new(AntiSqueezeMagnitude)))
        .register("anti-squeeze-exact", |_| Ok(Box::new(AntiSqueezeExact)))
        .register("snr-optimal", |_| Ok(Box::new(SnrOptimal)));
    reg
}
