use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectra::{CavityOpticsParams, OscillatorParams};

/// Tolerance on Σ|w_k0|² − 1.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// One optomechanical sensor of the array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensor {
    pub oscillator: OscillatorParams,
    /// Cavity parameters; the power field is ignored inside an array, where
    /// each sensor receives |w_k0|² of the total power.
    pub cavity: CavityOpticsParams,
    /// Force per unit common drive 𝓜_k.
    pub response: f64,
}

impl Sensor {
    pub fn new(oscillator: OscillatorParams, cavity: CavityOpticsParams) -> Self {
        Self {
            oscillator,
            cavity,
            response: 1.0,
        }
    }

    pub fn with_response(mut self, response: f64) -> Self {
        self.response = response;
        self
    }
}

/// Outcome of checking a dividing/combining weight pair.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDiagnostics {
    pub norm_sq: f64,
    /// Sensors whose dividing weight is not real and positive.
    pub phased_sensors: Vec<usize>,
    /// W ∝ w*, so that Σ_k W_{0k} w_{k0} is real and maximal.
    pub matched: bool,
    pub warnings: Vec<String>,
}

/// Check Σ|w|² = 1 and report phases and matching.
pub fn validate_network(dividing: &[Complex64], combining: &[Complex64]) -> Result<NetworkDiagnostics> {
    if dividing.is_empty() {
        return Err(Error::InvalidArray("array has no sensors".into()));
    }
    if dividing.len() != combining.len() {
        return Err(Error::InvalidArray(format!(
            "{} dividing weights but {} combining weights",
            dividing.len(),
            combining.len()
        )));
    }
    if dividing.iter().chain(combining).any(|w| !w.re.is_finite() || !w.im.is_finite()) {
        return Err(Error::InvalidArray("weights must be finite".into()));
    }
    let norm_sq: f64 = dividing.iter().map(|w| w.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::UnnormalizedWeights { norm_sq });
    }

    let phased_sensors: Vec<usize> = dividing
        .iter()
        .enumerate()
        .filter(|(_, w)| (w.norm() > 0.0 && w.im.abs() > 1e-12 * w.norm()) || w.re < 0.0)
        .map(|(k, _)| k)
        .collect();

    // W ∝ w* ⇔ |⟨w*, W⟩| = ‖w‖‖W‖
    let overlap: Complex64 = dividing.iter().zip(combining).map(|(w, c)| w * c).sum();
    let combining_norm = combining.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let matched = combining_norm > 0.0
        && (overlap.norm() - norm_sq.sqrt() * combining_norm).abs() <= 1e-10 * combining_norm;

    let mut warnings = Vec::new();
    if !phased_sensors.is_empty() {
        warnings.push(format!(
            "dividing weights of sensors {phased_sensors:?} carry a phase; the closed-form noise treats them as complex amplitudes on each quadrature"
        ));
    }
    if combining_norm == 0.0 {
        warnings.push("all combining weights are zero".into());
    }
    Ok(NetworkDiagnostics {
        norm_sq,
        phased_sensors,
        matched,
        warnings,
    })
}

/// M sensors fed by one beam through a beam-splitter network.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    sensors: Vec<Sensor>,
    dividing: Vec<Complex64>,
    combining: Vec<Complex64>,
    total_power: f64,
    diagnostics: NetworkDiagnostics,
}

impl ArrayConfig {
    pub fn new(
        sensors: Vec<Sensor>,
        dividing: Vec<Complex64>,
        combining: Vec<Complex64>,
        total_power: f64,
    ) -> Result<Self> {
        if sensors.len() != dividing.len() {
            return Err(Error::InvalidArray(format!(
                "{} sensors but {} dividing weights",
                sensors.len(),
                dividing.len()
            )));
        }
        if !(total_power >= 0.0 && total_power.is_finite()) {
            return Err(Error::invalid("total_power", format!("{total_power} must be ≥ 0")));
        }
        let diagnostics = validate_network(&dividing, &combining)?;
        Ok(Self {
            sensors,
            dividing,
            combining,
            total_power,
            diagnostics,
        })
    }

    /// M copies of one sensor, uniform dividing weights 1/√M, matched combining,
    /// and total power M·`power_per_sensor`.
    pub fn identical(sensor: Sensor, m: usize, power_per_sensor: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArray("array has no sensors".into()));
        }
        let w = Complex64::from(1.0 / (m as f64).sqrt());
        Self::new(vec![sensor; m], vec![w; m], vec![w; m], m as f64 * power_per_sensor)
    }

    /// Dividing weights with combining weights W = w*.
    pub fn matched(sensors: Vec<Sensor>, dividing: Vec<Complex64>, total_power: f64) -> Result<Self> {
        let combining = dividing.iter().map(|w| w.conj()).collect();
        Self::new(sensors, dividing, combining, total_power)
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    pub fn sensors(&self) -> &[Sensor] {
        &self.sensors
    }

    pub fn dividing(&self) -> &[Complex64] {
        &self.dividing
    }

    pub fn combining(&self) -> &[Complex64] {
        &self.combining
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    pub fn diagnostics(&self) -> &NetworkDiagnostics {
        &self.diagnostics
    }

    /// Power reaching sensor k, |w_k0|²·P_tot.
    pub fn sensor_power(&self, k: usize) -> f64 {
        self.dividing[k].norm_sqr() * self.total_power
    }

    pub fn with_combining(&self, combining: Vec<Complex64>) -> Result<Self> {
        Self::new(self.sensors.clone(), self.dividing.clone(), combining, self.total_power)
    }

    pub fn with_total_power(&self, total_power: f64) -> Result<Self> {
        Self::new(self.sensors.clone(), self.dividing.clone(), self.combining.clone(), total_power)
    }

    pub fn map_sensors(&self, f: impl Fn(&Sensor) -> Result<Sensor>) -> Result<Self> {
        let sensors = self.sensors.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(sensors, self.dividing.clone(), self.combining.clone(), self.total_power)
    }

    /// True when every sensor has the same oscillator, cavity and response.
    pub fn is_identical(&self) -> bool {
        let first = &self.sensors[0];
        self.sensors.iter().all(|s| {
            s.oscillator == first.oscillator
                && s.response == first.response
                && CavityOpticsParams::with_power(s.cavity, 0.0).ok()
                    == CavityOpticsParams::with_power(first.cavity, 0.0).ok()
        })
    }
}

/// |Σ_n W_{0n}𝓜_n|²·f².
pub fn array_signal_psd(cfg: &ArrayConfig, drive: f64) -> f64 {
    signal_gain(cfg).norm_sqr() * drive * drive
}

/// Σ_n W_{0n}𝓜_n, the combined response to a common unit drive.
pub fn signal_gain(cfg: &ArrayConfig) -> Complex64 {
    cfg.combining
        .iter()
        .zip(&cfg.sensors)
        .map(|(w, s)| w * s.response)
        .sum()
}

/// Σ_k SNR_k², the power-level combination of independent sensors.
pub fn incoherent_baseline(per_sensor_snrs: &[f64]) -> Result<f64> {
    if let Some(bad) = per_sensor_snrs.iter().find(|s| !(**s >= 0.0)) {
        return Err(Error::invalid("per_sensor_snrs", format!("SNR {bad} must be ≥ 0")));
    }
    Ok(per_sensor_snrs.iter().map(|s| s * s).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn sensor() -> Sensor {
        Sensor::new(
            presets::membrane_oscillator(Default::default()),
            presets::membrane_cavity(2e-3),
        )
    }

    #[test]
    fn uniform_weights_are_valid_and_matched() {
        let cfg = ArrayConfig::identical(sensor(), 5, 2e-3).unwrap();
        assert!(cfg.diagnostics().matched);
        assert!(cfg.diagnostics().warnings.is_empty());
        assert!((cfg.diagnostics().norm_sq - 1.0).abs() < 1e-15);
        assert!(cfg.is_identical());
        assert!((cfg.sensor_power(3) - 2e-3).abs() < 1e-18);
    }

    #[test]
    fn single_routing_is_valid() {
        let mut w = vec![Complex64::from(0.0); 3];
        w[0] = Complex64::from(1.0);
        let d = validate_network(&w, &w).unwrap();
        assert!(d.matched);
    }

    #[test]
    fn unnormalized_weights_rejected() {
        let w = vec![Complex64::from(1.1f64.sqrt())];
        assert_eq!(
            validate_network(&w, &w).unwrap_err(),
            Error::UnnormalizedWeights { norm_sq: 1.1f64.sqrt().powi(2) }
        );
    }

    #[test]
    fn phased_and_unmatched_weights_are_reported() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let w = vec![Complex64::from(h), Complex64::new(0.0, h)];
        let same = w.clone();
        let d = validate_network(&w, &same).unwrap();
        assert_eq!(d.phased_sensors, vec![1]);
        assert!(!d.matched);
        assert_eq!(d.warnings.len(), 1);
        let conj: Vec<_> = w.iter().map(|x| x.conj()).collect();
        assert!(validate_network(&w, &conj).unwrap().matched);
    }

    #[test]
    fn signal_scaling() {
        for m in [1usize, 2, 7] {
            let cfg = ArrayConfig::identical(sensor().with_response(2.5), m, 1e-3).unwrap();
            let s = array_signal_psd(&cfg, 0.3);
            assert!((s / (m as f64 * 2.5f64.powi(2) * 0.09) - 1.0).abs() < 1e-14);
        }
        let w = Complex64::from(0.5);
        let sensors = (0..4)
            .map(|k| sensor().with_response(if k % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        let alternating = ArrayConfig::new(sensors, vec![w; 4], vec![w; 4], 1e-3).unwrap();
        assert!(array_signal_psd(&alternating, 1.0).abs() < 1e-30);
    }

    #[test]
    fn incoherent_sum() {
        assert_eq!(incoherent_baseline(&[2.0; 4]).unwrap(), 16.0);
        assert_eq!(incoherent_baseline(&[3.0]).unwrap(), 9.0);
        assert_eq!(incoherent_baseline(&[2.0, 0.0, 2.0]).unwrap(), 8.0);
        assert!(incoherent_baseline(&[-1.0]).is_err());
    }
}
