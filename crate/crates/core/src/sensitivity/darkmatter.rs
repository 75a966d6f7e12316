//! Stochastic dark-matter drive, observation runs, and minimum detectable coupling.

use crate::constants::{gev_per_cm3_to_kg_per_m3, YEAR_S};
use crate::error::{Error, Result};

pub const DEFAULT_DENSITY_GEV_CM3: f64 = 0.4;
/// Δ_a = 10⁻⁶·Ω_DM from the virial velocity dispersion v² ~ 10⁻⁶.
pub const DEFAULT_LINEWIDTH_FRACTION: f64 = 1e-6;
pub const DEFAULT_THRESHOLD: f64 = 1.0;

/// Narrow-band force drive F_DM = g·√ρ_DM·𝓜 with PSD F_DM²/Δ_a.
///
/// The material factor is stored per unit mass (m/s² per unit g·√ρ), so a
/// sensor of mass m sees 𝓜 = m·`material_acceleration`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkMatterModel {
    pub coupling: f64,
    /// ρ_DM (kg/m³).
    pub density: f64,
    pub material_acceleration: f64,
    /// Ω_DM (rad/s).
    pub compton_omega: f64,
    /// Δ_a (rad/s).
    pub linewidth: f64,
}

impl DarkMatterModel {
    /// Model with the default density and Δ_a = 10⁻⁶·Ω_DM.
    pub fn new(coupling: f64, material_acceleration: f64, compton_omega: f64) -> Result<Self> {
        Self {
            coupling,
            density: gev_per_cm3_to_kg_per_m3(DEFAULT_DENSITY_GEV_CM3),
            material_acceleration,
            compton_omega,
            linewidth: DEFAULT_LINEWIDTH_FRACTION * compton_omega,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.coupling >= 0.0 && self.coupling.is_finite()) {
            return Err(Error::invalid("coupling", format!("{} must be ≥ 0", self.coupling)));
        }
        if !(self.density > 0.0) {
            return Err(Error::invalid("density", "ρ_DM must be > 0"));
        }
        if !(self.material_acceleration > 0.0) {
            return Err(Error::invalid("material_acceleration", "must be > 0"));
        }
        if !(self.compton_omega > 0.0) {
            return Err(Error::invalid("compton_omega", "Ω_DM must be > 0"));
        }
        if !(self.linewidth > 0.0) {
            return Err(Error::invalid("linewidth", "Δ_a must be > 0"));
        }
        Ok(self)
    }

    /// Same model at another Compton frequency, keeping Δ_a/Ω_DM fixed.
    pub fn at_frequency(&self, compton_omega: f64) -> Result<Self> {
        Self {
            compton_omega,
            linewidth: self.linewidth / self.compton_omega * compton_omega,
            ..*self
        }
        .validated()
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self { coupling, ..*self }
    }

    /// Common drive amplitude g·√ρ_DM.
    pub fn drive_amplitude(&self) -> f64 {
        self.coupling * self.density.sqrt()
    }

    /// PSD of the common drive, (g√ρ)²/Δ_a; scales as g².
    pub fn drive_psd(&self) -> f64 {
        self.drive_amplitude().powi(2) / self.linewidth
    }

    /// 𝓜 for a sensor of this mass.
    pub fn material_factor(&self, mass: f64) -> f64 {
        mass * self.material_acceleration
    }

    /// F_DM on a sensor of this mass.
    pub fn force_amplitude(&self, mass: f64) -> f64 {
        self.drive_amplitude() * self.material_factor(mass)
    }

    /// S̄_Fdr = F_DM²/Δ_a on a sensor of this mass.
    pub fn force_psd(&self, mass: f64) -> f64 {
        self.force_amplitude(mass).powi(2) / self.linewidth
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPlan {
    /// T_O (s).
    pub total_time: f64,
    /// T_int (s); `None` means 1/Δ_a.
    pub integration_time: Option<f64>,
    pub threshold: f64,
}

impl ObservationPlan {
    pub fn new(total_time: f64) -> Result<Self> {
        if !(total_time > 0.0) {
            return Err(Error::invalid("total_time", "T_O must be > 0"));
        }
        Ok(Self {
            total_time,
            integration_time: None,
            threshold: DEFAULT_THRESHOLD,
        })
    }

    pub fn one_year() -> Self {
        Self::new(YEAR_S).expect("a year is positive")
    }

    pub fn integration_time(&self, dm: &DarkMatterModel) -> f64 {
        self.integration_time.unwrap_or(1.0 / dm.linewidth)
    }

    pub fn check(&self, dm: &DarkMatterModel) -> Result<Vec<String>> {
        let t_int = self.integration_time(dm);
        if !(t_int > 0.0) {
            return Err(Error::invalid("integration_time", "T_int must be > 0"));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::invalid("threshold", "SNR threshold must be > 0"));
        }
        let mut warnings = Vec::new();
        if self.total_time < t_int {
            warnings.push(format!(
                "observation time {:.3e} s is shorter than the integration time {t_int:.3e} s",
                self.total_time
            ));
        }
        if dm.linewidth * self.total_time < 1.0 {
            warnings.push(format!(
                "Δ_a·T_O = {:.3e} < 1: the √(Δ_a·T_O) averaging law does not apply",
                dm.linewidth * self.total_time
            ));
        }
        if t_int > 1.0 / dm.linewidth * (1.0 + 1e-12) {
            warnings.push(format!(
                "integration time {t_int:.3e} s exceeds the coherence time 1/Δ_a = {:.3e} s; fewer independent repetitions fit in T_O",
                1.0 / dm.linewidth
            ));
        }
        Ok(warnings)
    }
}

/// SNR = (S̄_dr/S̄_noise)·√(Δ_a·T_O).
pub fn snr_observation(drive_psd: f64, noise_psd: f64, dm: &DarkMatterModel, plan: &ObservationPlan) -> f64 {
    drive_psd / noise_psd * (dm.linewidth * plan.total_time).sqrt()
}

/// Coupling at which the SNR reaches the plan threshold, for a detector whose
/// signal-to-noise PSD ratio per unit common-drive PSD is `snr_density`.
///
/// SNR is exactly quadratic in g, so g_min = g_ref·√(threshold/SNR(g_ref)).
pub fn min_detectable_coupling_from_density(snr_density: f64, dm: &DarkMatterModel, plan: &ObservationPlan) -> Result<f64> {
    if !(snr_density > 0.0 && snr_density.is_finite()) {
        return Err(Error::invalid("snr_density", format!("{snr_density} must be finite and > 0")));
    }
    let reference = if dm.coupling > 0.0 { *dm } else { dm.with_coupling(1.0) };
    let snr = snr_density * reference.drive_psd() * (reference.linewidth * plan.total_time).sqrt();
    Ok(reference.coupling * (plan.threshold / snr).sqrt())
}

/// g_min for a combined response `signal_gain_sq` = |Σ W𝓜|² (N² per unit drive²)
/// against a noise PSD (N²/Hz).
pub fn min_detectable_coupling(noise_psd: f64, signal_gain_sq: f64, dm: &DarkMatterModel, plan: &ObservationPlan) -> Result<f64> {
    if !(noise_psd > 0.0) {
        return Err(Error::NonPositiveNoise {
            omega: dm.compton_omega,
            value: noise_psd,
        });
    }
    min_detectable_coupling_from_density(signal_gain_sq / noise_psd, dm, plan)
}

/// A quoted (coupling, acceleration-noise) pair that fixes the material factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingAnchor {
    pub coupling: f64,
    /// Acceleration noise amplitude (m s⁻²/√Hz).
    pub acceleration_asd: f64,
    pub compton_omega: f64,
    pub total_time: f64,
    pub threshold: f64,
    pub density: f64,
    pub linewidth_fraction: f64,
}

/// 𝓜/m such that the anchor's noise gives SNR = threshold at the anchor coupling:
/// (𝓜/m)² = threshold·a²·Δ_a/(g²·ρ·√(Δ_a·T_O)).
pub fn calibrate_material_acceleration(anchor: &CouplingAnchor) -> Result<f64> {
    if !(anchor.coupling > 0.0 && anchor.acceleration_asd > 0.0 && anchor.compton_omega > 0.0) {
        return Err(Error::invalid("anchor", "coupling, noise and frequency must be > 0"));
    }
    if !(anchor.total_time > 0.0 && anchor.threshold > 0.0 && anchor.density > 0.0 && anchor.linewidth_fraction > 0.0) {
        return Err(Error::invalid("anchor", "time, threshold, density and linewidth must be > 0"));
    }
    let delta = anchor.linewidth_fraction * anchor.compton_omega;
    let m2 = anchor.threshold * anchor.acceleration_asd.powi(2) * delta
        / (anchor.coupling.powi(2) * anchor.density * (delta * anchor.total_time).sqrt());
    Ok(m2.sqrt())
}
