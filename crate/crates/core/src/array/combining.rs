//! Combining-weight policies W_{0k}.

use num_complex::Complex64;

use super::config::Sensor;
use super::noise::sensor_amplitudes;
use crate::error::{Error, Result};
use crate::strategy::{Registry, StrategyParams};

pub trait CombiningPolicy: Send + Sync {
    fn name(&self) -> &'static str;

    fn weights(&self, sensors: &[Sensor], dividing: &[Complex64], total_power: f64) -> Result<Vec<Complex64>>;
}

/// W = w*.
#[derive(Debug, Clone, Copy)]
pub struct Matched;

impl CombiningPolicy for Matched {
    fn name(&self) -> &'static str {
        "matched"
    }

    fn weights(&self, _: &[Sensor], dividing: &[Complex64], _: f64) -> Result<Vec<Complex64>> {
        Ok(dividing.iter().map(|w| w.conj()).collect())
    }
}

/// W_{0k} = 1/√M.
#[derive(Debug, Clone, Copy)]
pub struct Uniform;

impl CombiningPolicy for Uniform {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn weights(&self, sensors: &[Sensor], _: &[Complex64], _: f64) -> Result<Vec<Complex64>> {
        let m = sensors.len() as f64;
        Ok(vec![Complex64::from(1.0 / m.sqrt()); sensors.len()])
    }
}

/// W_{0k} ∝ 𝓜_k/S_k(ω_ref), S_k being sensor k's own vacuum-input noise at
/// its share of the power; renormalized to Σ|W|² = 1.
#[derive(Debug, Clone, Copy)]
pub struct InverseVariance {
    /// Reference frequency; `None` uses the mean resonance.
    pub omega: Option<f64>,
}

impl CombiningPolicy for InverseVariance {
    fn name(&self) -> &'static str {
        "inverse-variance"
    }

    fn weights(&self, sensors: &[Sensor], dividing: &[Complex64], total_power: f64) -> Result<Vec<Complex64>> {
        let omega = self.omega.unwrap_or_else(|| {
            sensors.iter().map(|s| s.oscillator.resonance()).sum::<f64>() / sensors.len() as f64
        });
        let mut raw = Vec::with_capacity(sensors.len());
        for (k, (s, w)) in sensors.iter().zip(dividing).enumerate() {
            if w.norm_sqr() == 0.0 {
                raw.push(0.0);
                continue;
            }
            let a = sensor_amplitudes(s, w.norm_sqr() * total_power, k, omega)?;
            let noise = 0.5 * (a.shot.norm_sqr() + a.back_action.norm_sqr()) + a.thermal + a.loss;
            raw.push(s.response / noise);
        }
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidArray("inverse-variance weights are all zero".into()));
        }
        Ok(raw.into_iter().map(|x| Complex64::from(x / norm)).collect())
    }
}

pub fn combining_policies() -> Registry<dyn CombiningPolicy> {
    let mut reg: Registry<dyn CombiningPolicy> = Registry::new("combining");
    reg.register("matched", |_| Ok(Box::new(Matched)))
        .register("uniform", |_| Ok(Box::new(Uniform)))
        .register("inverse-variance", |p: &StrategyParams| {
            Ok(Box::new(InverseVariance {
                omega: p.get("omega_rad_s").copied(),
            }))
        });
    reg
}
