//! Parameter sweeps producing the figure-level tables.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::darkmatter::{min_detectable_coupling_from_density, DarkMatterModel, ObservationPlan};
use super::grid::{resonance_refined_grid, FrequencyGrid, GridSpec, Resonance};
use super::integrated::integrate_snr_density;
use super::quadrature::{QuadratureOptions, QuadratureResult};
use super::schemes::{DetectionScheme, SchemeSetup};
use crate::array::{array_noise_psd, AnglePolicy, ArrayConfig, CombinedNoiseBreakdown, CombiningPolicy, Sensor};
use crate::error::{Error, Result};
use crate::spectra::{QuadraturePsdTriple, SqueezingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerConvention {
    /// Every sensor receives `power`; the laser supplies M·`power`.
    #[default]
    PerSensor,
    /// The laser supplies `power`, shared by the sensors.
    Total,
}

/// M identical sensors behind a splitter, uniform unless `dividing` is given.
#[derive(Clone)]
pub struct ArrayTemplate {
    pub sensor: Sensor,
    pub sensors: usize,
    pub power: f64,
    pub convention: PowerConvention,
    pub combining: Arc<dyn CombiningPolicy>,
    pub dividing: Option<Vec<f64>>,
}

impl ArrayTemplate {
    pub fn total_power(&self) -> f64 {
        match self.convention {
            PowerConvention::PerSensor => self.power * self.sensors as f64,
            PowerConvention::Total => self.power,
        }
    }

    pub fn build(&self) -> Result<ArrayConfig> {
        if self.sensors == 0 {
            return Err(Error::InvalidArray("array has no sensors".into()));
        }
        let m = self.sensors;
        let sensors = vec![self.sensor; m];
        let dividing = match &self.dividing {
            Some(w) if w.len() != m => {
                return Err(Error::InvalidArray(format!("{} dividing weights for {m} sensors", w.len())))
            }
            Some(w) => w.iter().map(|&x| Complex64::from(x)).collect(),
            None => vec![Complex64::from(1.0 / (m as f64).sqrt()); m],
        };
        let combining = self.combining.weights(&sensors, &dividing, self.total_power())?;
        ArrayConfig::new(sensors, dividing, combining, self.total_power())
    }
}

/// Everything needed to evaluate integrated sensitivities and couplings.
#[derive(Clone)]
pub struct SensitivityModel {
    pub template: ArrayTemplate,
    pub squeezing: SqueezingConfig,
    pub angle: Arc<dyn AnglePolicy>,
    pub schemes: Vec<Arc<dyn DetectionScheme>>,
    pub span: Option<(f64, f64)>,
    pub points_per_decade: usize,
    pub quadrature: QuadratureOptions,
    pub dark_matter: Option<(DarkMatterModel, ObservationPlan)>,
}

impl SensitivityModel {
    pub fn setup(&self) -> Result<SchemeSetup> {
        let mut array = self.template.build()?;
        if let Some((dm, _)) = &self.dark_matter {
            array = array.map_sensors(|s| Ok(s.with_response(dm.material_factor(s.oscillator.mass()))))?;
        }
        Ok(SchemeSetup {
            array,
            squeezing: self.squeezing,
            angle: self.angle.clone(),
        })
    }

    pub fn grid_spec(&self, array: &ArrayConfig) -> GridSpec {
        let mut resonances: Vec<Resonance> = Vec::new();
        for s in array.sensors() {
            let r = Resonance {
                omega: s.oscillator.resonance(),
                linewidth: s.oscillator.damping(),
            };
            if !resonances.contains(&r) {
                resonances.push(r);
            }
        }
        let kappa = array.sensors().iter().map(|s| s.cavity.kappa()).fold(f64::INFINITY, f64::min);
        let mut spec = GridSpec::new(resonances, Some(kappa));
        spec.span = self.span;
        spec.points_per_decade = self.points_per_decade;
        spec
    }

    pub fn grid(&self, array: &ArrayConfig) -> Result<FrequencyGrid> {
        resonance_refined_grid(&self.grid_spec(array))
    }

    /// Integrated sensitivity of one scheme for a unit flat drive.
    pub fn integrate(&self, scheme: &dyn DetectionScheme) -> Result<QuadratureResult> {
        let setup = self.setup()?;
        let grid = self.grid(&setup.array)?;
        integrate_snr_density(|omega| scheme.snr_density(&setup, omega), &grid, &self.quadrature)
    }

    /// g_min of one scheme at the given Compton frequency.
    pub fn coupling(&self, scheme: &dyn DetectionScheme, compton_omega: f64) -> Result<f64> {
        let (dm, plan) = self
            .dark_matter
            .as_ref()
            .ok_or_else(|| Error::invalid("dark_matter", "coupling projections need a dark-matter model"))?;
        let dm = dm.at_frequency(compton_omega)?;
        let setup = self.setup()?;
        let density = scheme.snr_density(&setup, compton_omega)?;
        min_detectable_coupling_from_density(density, &dm, plan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    Sensors,
    /// Power in the template's convention (W).
    Power,
    /// Detection efficiency η².
    Efficiency,
    /// Compton frequency Ω_DM (rad/s); couplings only.
    DmFrequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub value: f64,
    /// Per scheme, in the model's scheme order.
    pub integrated: Vec<(&'static str, Result<QuadratureResult>)>,
    pub couplings: Vec<(&'static str, Result<f64>)>,
    /// Vacuum-input breakdown at the first sensor's resonance.
    pub resonance: Option<Result<CombinedNoiseBreakdown>>,
}

fn model_at(model: &SensitivityModel, axis: ScanAxis, value: f64) -> Result<SensitivityModel> {
    let mut m = model.clone();
    match axis {
        ScanAxis::Sensors => {
            if !(value >= 1.0 && value.fract() == 0.0) {
                return Err(Error::invalid("sensors", format!("{value} is not a positive integer")));
            }
            m.template.sensors = value as usize;
        }
        ScanAxis::Power => m.template.power = value,
        ScanAxis::Efficiency => m.template.sensor.cavity = m.template.sensor.cavity.with_efficiency_sq(value)?,
        ScanAxis::DmFrequency => {}
    }
    Ok(m)
}

fn scan_point(model: &SensitivityModel, axis: ScanAxis, value: f64) -> ScanRecord {
    let point = model_at(model, axis, value);
    let names: Vec<&'static str> = model.schemes.iter().map(|s| s.name()).collect();
    let m = match point {
        Ok(m) => m,
        Err(e) => {
            return ScanRecord {
                value,
                integrated: if axis == ScanAxis::DmFrequency {
                    vec![]
                } else {
                    names.iter().map(|n| (*n, Err(e.clone()))).collect()
                },
                couplings: if model.dark_matter.is_some() {
                    names.iter().map(|n| (*n, Err(e.clone()))).collect()
                } else {
                    vec![]
                },
                resonance: None,
            };
        }
    };
    let integrated = if axis == ScanAxis::DmFrequency {
        vec![]
    } else {
        m.schemes.iter().map(|s| (s.name(), m.integrate(s.as_ref()))).collect()
    };
    let couplings = match &m.dark_matter {
        Some((dm, _)) => {
            let omega = if axis == ScanAxis::DmFrequency { value } else { dm.compton_omega };
            m.schemes.iter().map(|s| (s.name(), m.coupling(s.as_ref(), omega))).collect()
        }
        None => vec![],
    };
    let resonance = (axis != ScanAxis::DmFrequency).then(|| {
        m.template.build().and_then(|cfg| {
            let omega = cfg.sensors()[0].oscillator.resonance();
            array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, omega)
        })
    });
    ScanRecord {
        value,
        integrated,
        couplings,
        resonance,
    }
}

/// Evaluate every scan value in parallel; records come back in input order.
pub fn scan_curves(model: &SensitivityModel, axis: ScanAxis, values: &[f64]) -> Vec<ScanRecord> {
    values.par_iter().map(|&v| scan_point(model, axis, v)).collect()
}
