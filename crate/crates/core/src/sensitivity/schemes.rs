//! Readout schemes compared across the figures: each maps a setup to the
//! signal-to-noise PSD ratio per unit common-drive PSD.

use std::sync::Arc;

use num_complex::Complex64;

use crate::array::{
    array_noise_psd, array_sql_psd, array_thermal_psd, coherent_sums, sensor_amplitudes, signal_gain,
    squeezed_from_sums, AnglePolicy, ArrayConfig,
};
use crate::error::{Error, Result};
use crate::numerics::scan_then_refine;
use crate::spectra::{QuadraturePsdTriple, SqueezingConfig};
use crate::strategy::{Registry, StrategyParams};

#[derive(Clone)]
pub struct SchemeSetup {
    pub array: ArrayConfig,
    pub squeezing: SqueezingConfig,
    pub angle: Arc<dyn AnglePolicy>,
}

impl std::fmt::Debug for SchemeSetup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SchemeSetup")
            .field("array", &self.array)
            .field("squeezing", &self.squeezing)
            .field("angle", &self.angle.name())
            .finish()
    }
}

pub trait DetectionScheme: Send + Sync {
    fn name(&self) -> &'static str;

    /// S_signal/S_noise per unit drive PSD at ω.
    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64>;
}

fn ratio(gain_sq: f64, noise: f64, omega: f64) -> Result<f64> {
    if !(noise > 0.0) {
        return Err(Error::NonPositiveNoise { omega, value: noise });
    }
    Ok(gain_sq / noise)
}

/// Vacuum input, coherent combination.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalCoherent;

impl DetectionScheme for ClassicalCoherent {
    fn name(&self) -> &'static str {
        "classical-coherent"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        let noise = array_noise_psd(&setup.array, &QuadraturePsdTriple::VACUUM, omega)?.total;
        ratio(signal_gain(&setup.array).norm_sqr(), noise, omega)
    }
}

/// Each sensor read out on its own with its share of the power; the
/// per-sensor SNRs add in quadrature.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalIncoherent;

impl DetectionScheme for ClassicalIncoherent {
    fn name(&self) -> &'static str {
        "classical-incoherent"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        let cfg = &setup.array;
        let mut sum_sq = 0.0;
        for (k, s) in cfg.sensors().iter().enumerate() {
            let power = cfg.sensor_power(k);
            if power == 0.0 {
                continue;
            }
            let a = sensor_amplitudes(s, power, k, omega)?;
            let noise = 0.5 * (a.shot.norm_sqr() + a.back_action.norm_sqr()) + a.thermal + a.loss;
            sum_sq += ratio(s.response * s.response, noise, omega)?.powi(2);
        }
        Ok(sum_sq.sqrt())
    }
}

/// One squeezed beam split across the array.
#[derive(Debug, Clone, Copy)]
pub struct DistributedSqueezing;

impl DetectionScheme for DistributedSqueezing {
    fn name(&self) -> &'static str {
        "dqs"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        let r = setup.squeezing.strength();
        let sums = coherent_sums(&setup.array, omega)?;
        let theta = setup.angle.angle(&sums, r);
        let noise = squeezed_from_sums(&setup.array, &sums, r, theta).total;
        ratio(signal_gain(&setup.array).norm_sqr(), noise, omega)
    }
}

/// A separate squeezed vacuum of the full strength on every sensor, combined
/// coherently; each sensor uses its own angle.
#[derive(Debug, Clone, Copy)]
pub struct IndependentSqueezing;

impl DetectionScheme for IndependentSqueezing {
    fn name(&self) -> &'static str {
        "dcs"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        let cfg = &setup.array;
        let r = setup.squeezing.strength();
        let one = Complex64::from(1.0);
        let mut noise = 0.0;
        for (k, s) in cfg.sensors().iter().enumerate() {
            let w2 = cfg.combining()[k].norm_sqr();
            if w2 == 0.0 {
                continue;
            }
            let single = ArrayConfig::new(vec![*s], vec![one], vec![one], cfg.sensor_power(k))?;
            let sums = coherent_sums(&single, omega).map_err(|e| match e {
                Error::NoOpticalReadout { omega, .. } => Error::NoOpticalReadout { sensor: k, omega },
                other => other,
            })?;
            let theta = setup.angle.angle(&sums, r);
            noise += w2 * squeezed_from_sums(&single, &sums, r, theta).total;
        }
        ratio(signal_gain(cfg).norm_sqr(), noise, omega)
    }
}

/// Array SQL plus thermal noise: the best vacuum-input readout with the
/// power tuned at every frequency.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalSql;

impl DetectionScheme for ClassicalSql {
    fn name(&self) -> &'static str {
        "classical-sql"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        let noise = array_sql_psd(&setup.array, omega) + array_thermal_psd(&setup.array);
        ratio(signal_gain(&setup.array).norm_sqr(), noise, omega)
    }
}

/// Distributed squeezing with the total power optimized at every frequency.
#[derive(Debug, Clone, Copy)]
pub struct DistributedSqueezingLimit {
    /// Search range ±decades around the configured power.
    pub decades: f64,
}

impl Default for DistributedSqueezingLimit {
    fn default() -> Self {
        Self { decades: 6.0 }
    }
}

impl DistributedSqueezingLimit {
    /// Best total noise and the power achieving it.
    pub fn optimize(&self, setup: &SchemeSetup, omega: f64) -> Result<(f64, f64)> {
        let base = setup.array.total_power();
        if !(base > 0.0) {
            return Err(Error::invalid("total_power", "power search needs a positive starting power"));
        }
        let r = setup.squeezing.strength();
        let span = self.decades * std::f64::consts::LN_10;
        let noise_at = |log_p: f64| -> f64 {
            setup
                .array
                .with_total_power(base * log_p.exp())
                .and_then(|cfg| {
                    let sums = coherent_sums(&cfg, omega)?;
                    let theta = setup.angle.angle(&sums, r);
                    Ok(squeezed_from_sums(&cfg, &sums, r, theta).total)
                })
                .unwrap_or(f64::INFINITY)
        };
        let (log_p, noise) = scan_then_refine(noise_at, -span, span, 48, 1e-6);
        if !noise.is_finite() {
            return Err(Error::NonPositiveNoise { omega, value: noise });
        }
        Ok((noise, base * log_p.exp()))
    }
}

impl DetectionScheme for DistributedSqueezingLimit {
    fn name(&self) -> &'static str {
        "dqs-limit"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        let (noise, _) = self.optimize(setup, omega)?;
        ratio(signal_gain(&setup.array).norm_sqr(), noise, omega)
    }
}

/// Thermal noise alone: the floor set by the mechanical bath.
#[derive(Debug, Clone, Copy)]
pub struct ThermalFloor;

impl DetectionScheme for ThermalFloor {
    fn name(&self) -> &'static str {
        "thermal-floor"
    }

    fn snr_density(&self, setup: &SchemeSetup, omega: f64) -> Result<f64> {
        ratio(signal_gain(&setup.array).norm_sqr(), array_thermal_psd(&setup.array), omega)
    }
}

pub fn detection_schemes() -> Registry<dyn DetectionScheme> {
    let mut reg: Registry<dyn DetectionScheme> = Registry::new("scheme");
    reg.register("classical-coherent", |_| Ok(Box::new(ClassicalCoherent)))
        .register("classical-incoherent", |_| Ok(Box::new(ClassicalIncoherent)))
        .register("dqs", |_| Ok(Box::new(DistributedSqueezing)))
        .register("dcs", |_| Ok(Box::new(IndependentSqueezing)))
        .register("classical-sql", |_| Ok(Box::new(ClassicalSql)))
        .register("thermal-floor", |_| Ok(Box::new(ThermalFloor)))
        .register("dqs-limit", |p: &StrategyParams| {
            Ok(Box::new(DistributedSqueezingLimit {
                decades: p.get("power_decades").copied().unwrap_or(6.0),
            }))
        });
    reg
}
