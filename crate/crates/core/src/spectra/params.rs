use std::fmt;

use crate::constants::{C_LIGHT, HBAR, K_B};
use crate::error::{Error, Result};

/// How a quoted quality factor maps onto the damping rate γ that appears
/// in χ_ω = Ω/(Ω² − ω² − 2iγω).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DampingConvention {
    /// γ is the half linewidth: Q = Ω/(2γ).
    #[default]
    Half,
    /// γ is the full linewidth: Q = Ω/γ.
    Full,
}

impl DampingConvention {
    pub fn damping(self, resonance: f64, quality: f64) -> f64 {
        match self {
            DampingConvention::Half => resonance / (2.0 * quality),
            DampingConvention::Full => resonance / quality,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DampingConvention::Half => "half",
            DampingConvention::Full => "full",
        }
    }
}

impl fmt::Display for DampingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DampingConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(DampingConvention::Half),
            "full" => Ok(DampingConvention::Full),
            other => Err(Error::invalid(
                "gamma_convention",
                format!("expected `half` or `full`, got `{other}`"),
            )),
        }
    }
}

/// Mechanical test mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    mass: f64,
    resonance: f64,
    damping: f64,
    temperature: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, resonance: f64, damping: f64, temperature: f64) -> Result<Self> {
        positive("mass", mass)?;
        positive("resonance", resonance)?;
        positive("damping", damping)?;
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::invalid("temperature", format!("{temperature} < 0")));
        }
        Ok(Self {
            mass,
            resonance,
            damping,
            temperature,
        })
    }

    pub fn from_quality(
        mass: f64,
        resonance: f64,
        quality: f64,
        temperature: f64,
        convention: DampingConvention,
    ) -> Result<Self> {
        positive("quality", quality)?;
        Self::new(
            mass,
            resonance,
            convention.damping(resonance, quality),
            temperature,
        )
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn resonance(&self) -> f64 {
        self.resonance
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Q = Ω/(2γ).
    pub fn quality(&self) -> f64 {
        self.resonance / (2.0 * self.damping)
    }

    /// Thermal momentum-bath PSD K_B·T/(ħΩ).
    pub fn thermal_occupation(&self) -> f64 {
        K_B * self.temperature / (HBAR * self.resonance)
    }

    /// 4ħmγΩ·S̄_PP for the given bath PSD.
    pub fn thermal_force_psd(&self, bath_psd: f64) -> f64 {
        4.0 * HBAR * self.mass * self.damping * self.resonance * bath_psd
    }

    /// ħmΩ, the scale shared by every optical noise term.
    pub(crate) fn hbar_m_omega(&self) -> f64 {
        HBAR * self.mass * self.resonance
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        Self::new(self.mass, self.resonance, self.damping, temperature)
    }

    pub fn with_resonance(self, resonance: f64) -> Result<Self> {
        Self::new(self.mass, resonance, self.damping, self.temperature)
    }
}

/// Cavity and drive parameters of one sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityOpticsParams {
    kappa: f64,
    kappa_readout: f64,
    g0: f64,
    laser_omega: f64,
    power: f64,
    efficiency_sq: f64,
    length: Option<f64>,
}

impl CavityOpticsParams {
    pub fn new(
        kappa: f64,
        kappa_readout: f64,
        g0: f64,
        laser_omega: f64,
        power: f64,
        efficiency_sq: f64,
    ) -> Result<Self> {
        positive("kappa", kappa)?;
        positive("kappa_readout", kappa_readout)?;
        if kappa_readout > kappa * (1.0 + 1e-12) {
            return Err(Error::invalid(
                "kappa_readout",
                format!("κ_r = {kappa_readout} exceeds κ = {kappa}"),
            ));
        }
        if !(g0 >= 0.0 && g0.is_finite()) {
            return Err(Error::invalid("g0", format!("{g0} must be ≥ 0")));
        }
        positive("laser_omega", laser_omega)?;
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::invalid("power", format!("{power} must be ≥ 0")));
        }
        if !(efficiency_sq > 0.0 && efficiency_sq <= 1.0) {
            return Err(Error::invalid(
                "efficiency_sq",
                format!("η² = {efficiency_sq} must lie in (0, 1]"),
            ));
        }
        Ok(Self {
            kappa,
            kappa_readout,
            g0,
            laser_omega,
            power,
            efficiency_sq,
            length: None,
        })
    }

    /// Fabry–Perot cavity: G₀ = (Ω_L/L)·√(ħ/2mΩ).
    pub fn fabry_perot(
        kappa: f64,
        kappa_readout: f64,
        length: f64,
        laser_omega: f64,
        power: f64,
        efficiency_sq: f64,
        osc: &OscillatorParams,
    ) -> Result<Self> {
        positive("length", length)?;
        let g0 = laser_omega / length * (HBAR / (2.0 * osc.mass() * osc.resonance())).sqrt();
        let mut cav = Self::new(kappa, kappa_readout, g0, laser_omega, power, efficiency_sq)?;
        cav.length = Some(length);
        Ok(cav)
    }

    pub fn laser_omega_from_wavelength(wavelength: f64) -> f64 {
        2.0 * std::f64::consts::PI * C_LIGHT / wavelength
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn kappa_readout(&self) -> f64 {
        self.kappa_readout
    }

    /// Intra-cavity loss rate κ_ℓ = κ − κ_r.
    pub fn kappa_loss(&self) -> f64 {
        self.kappa - self.kappa_readout
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn laser_omega(&self) -> f64 {
        self.laser_omega
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Detection efficiency η².
    pub fn efficiency_sq(&self) -> f64 {
        self.efficiency_sq
    }

    pub fn length(&self) -> Option<f64> {
        self.length
    }

    /// Input photon flux E₀² = P/(ħΩ_L), in 1/s.
    pub fn input_flux(&self) -> f64 {
        self.power / (HBAR * self.laser_omega)
    }

    /// Intra-cavity photon number E² = (4κ_r/κ²)·E₀².
    pub fn intracavity_sq(&self) -> f64 {
        4.0 * self.kappa_readout / (self.kappa * self.kappa) * self.input_flux()
    }

    /// Enhanced coupling G² = G₀²E².
    pub fn coupling_sq(&self) -> f64 {
        self.g0 * self.g0 * self.intracavity_sq()
    }

    pub fn with_power(mut self, power: f64) -> Result<Self> {
        if !(power >= 0.0 && power.is_finite()) {
            return Err(Error::invalid("power", format!("{power} must be ≥ 0")));
        }
        self.power = power;
        Ok(self)
    }

    pub fn with_efficiency_sq(mut self, efficiency_sq: f64) -> Result<Self> {
        if !(efficiency_sq > 0.0 && efficiency_sq <= 1.0) {
            return Err(Error::invalid(
                "efficiency_sq",
                format!("η² = {efficiency_sq} must lie in (0, 1]"),
            ));
        }
        self.efficiency_sq = efficiency_sq;
        Ok(self)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be finite and > 0")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quality_is_half_linewidth_ratio() {
        let osc = OscillatorParams::from_quality(6e-6, 1.0e4, 1e9, 0.01, DampingConvention::Half)
            .unwrap();
        assert!((osc.quality() / 1e9 - 1.0).abs() < 1e-15);
        assert_eq!(osc.damping(), 1.0e4 / 2e9);

        let full = OscillatorParams::from_quality(6e-6, 1.0e4, 1e9, 0.01, DampingConvention::Full)
            .unwrap();
        assert_eq!(full.damping(), 2.0 * osc.damping());
    }

    #[test]
    fn rejects_unphysical_oscillators() {
        assert!(OscillatorParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 1.0, -1e-3).is_err());
    }

    #[test]
    fn readout_rate_bounded_by_total() {
        assert!(CavityOpticsParams::new(1.0, 1.1, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(CavityOpticsParams::new(1.0, 0.5, 1.0, 1.0, 1.0, 0.0).is_err());
        let cav = CavityOpticsParams::new(1.0, 0.5, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(cav.kappa_loss(), 0.5);
    }

    #[test]
    fn intracavity_field_follows_input_flux() {
        let cav = CavityOpticsParams::new(2.0, 1.5, 3.0, 5.0, 1e-3, 1.0).unwrap();
        let e0_sq = 1e-3 / (HBAR * 5.0);
        assert!((cav.input_flux() / e0_sq - 1.0).abs() < 1e-15);
        assert!((cav.intracavity_sq() / (4.0 * 1.5 / 4.0 * e0_sq) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fabry_perot_coupling() {
        let osc = OscillatorParams::new(6e-6, 1.2e4, 1e-5, 0.01).unwrap();
        let wl = CavityOpticsParams::laser_omega_from_wavelength(1.06e-6);
        let cav = CavityOpticsParams::fabry_perot(1e9, 1e9, 1e-3, wl, 1e-3, 1.0, &osc).unwrap();
        let expected = wl / 1e-3 * (HBAR / (2.0 * 6e-6 * 1.2e4)).sqrt();
        assert!((cav.g0() / expected - 1.0).abs() < 1e-15);
        assert_eq!(cav.length(), Some(1e-3));
    }
}
