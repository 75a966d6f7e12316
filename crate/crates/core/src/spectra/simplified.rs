//! Free-mirror model: a perfectly reflecting test mass imprints a phase
//! ζ·q on the probe, with no cavity in between.

use num_complex::Complex64;

use super::cavity::mechanical_susceptibility;
use super::params::{CavityOpticsParams, OscillatorParams};
use super::squeezing::QuadraturePsdTriple;
use crate::constants::{C_LIGHT, HBAR};
use crate::error::{Error, Result};

/// Parameters of the mirror model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifiedModel {
    /// Phase per unit displacement ζ (1/m).
    pub zeta: f64,
    /// Mean input amplitude E₀ (√Hz), E₀² being the photon flux.
    pub input_amplitude: f64,
    pub efficiency_sq: f64,
}

impl SimplifiedModel {
    /// Bare reflecting mirror: ζ = 2Ω_L/c.
    pub fn mirror(cav: &CavityOpticsParams) -> Self {
        Self {
            zeta: 2.0 * cav.laser_omega() / C_LIGHT,
            input_amplitude: cav.input_flux().sqrt(),
            efficiency_sq: cav.efficiency_sq(),
        }
    }

    pub fn noise_psd(
        &self,
        osc: &OscillatorParams,
        input: &QuadraturePsdTriple,
        bath_psd: Option<f64>,
        omega: f64,
    ) -> Result<f64> {
        simplified_model_noise_psd(
            self.zeta,
            self.input_amplitude,
            self.efficiency_sq,
            osc,
            input,
            bath_psd,
            omega,
        )
    }
}

/// Symmetrized force-noise PSD of the mirror model.
///
/// The momentum kick per photon is ħζ, which is 2ħΩ_L/c for the bare mirror.
pub fn simplified_model_noise_psd(
    zeta: f64,
    input_amplitude: f64,
    efficiency_sq: f64,
    osc: &OscillatorParams,
    input: &QuadraturePsdTriple,
    bath_psd: Option<f64>,
    omega: f64,
) -> Result<f64> {
    if !(input_amplitude > 0.0) {
        return Err(Error::invalid("input_amplitude", "E₀ must be > 0"));
    }
    if !(zeta > 0.0) {
        return Err(Error::invalid("zeta", "ζ must be > 0"));
    }
    if !(efficiency_sq > 0.0 && efficiency_sq <= 1.0) {
        return Err(Error::invalid("efficiency_sq", "η² must lie in (0, 1]"));
    }
    let m_omega = osc.mass() * osc.resonance();
    let b = |w: f64| {
        let chi = mechanical_susceptibility(osc, w).value;
        Complex64::from(m_omega) / (std::f64::consts::SQRT_2 * input_amplitude * zeta * chi)
    };
    let kick = HBAR * zeta;
    let b_here = b(omega);
    let b_prime_neg = std::f64::consts::SQRT_2 * kick * input_amplitude * b(-omega);

    let thermal = osc.thermal_force_psd(bath_psd.unwrap_or_else(|| osc.thermal_occupation()));
    let shot = b_here.norm_sqr() * (input.yy + (1.0 - efficiency_sq) / (2.0 * efficiency_sq));
    let back_action = 2.0 * kick * kick * input_amplitude * input_amplitude * input.xx;
    let correlation = 2.0 * (b_prime_neg * input.xy).re;
    Ok(thermal + shot + back_action + correlation)
}

/// Simplified-model parameters equivalent to a cavity in the bad-cavity limit.
#[derive(Debug, Clone, PartialEq)]
pub struct BadCavityMap {
    pub model: SimplifiedModel,
    /// 4Ω_L/(Lκ) when the cavity length is known.
    pub fabry_perot_zeta: Option<f64>,
    pub warning: Option<String>,
}

/// ħζ = (4G₀/κ)·√(2ħmΩ)·√(κ_r/κ); the last factor is 1 for an over-coupled cavity.
pub fn bad_cavity_map(cav: &CavityOpticsParams, osc: &OscillatorParams) -> BadCavityMap {
    let zeta = 4.0 * cav.g0() / cav.kappa()
        * (2.0 * osc.mass() * osc.resonance() / HBAR).sqrt()
        * (cav.kappa_readout() / cav.kappa()).sqrt();
    let warning = (cav.kappa() < 100.0 * osc.resonance()).then(|| {
        format!(
            "κ = {:.3e} rad/s is not ≫ Ω = {:.3e} rad/s; bad-cavity mapping is approximate",
            cav.kappa(),
            osc.resonance()
        )
    });
    BadCavityMap {
        model: SimplifiedModel {
            zeta,
            input_amplitude: cav.input_flux().sqrt(),
            efficiency_sq: cav.efficiency_sq(),
        },
        fabry_perot_zeta: cav
            .length()
            .map(|l| 4.0 * cav.laser_omega() / (l * cav.kappa())),
        warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::spectra::{input_quadrature_psds, single_sensor_noise_psd, SqueezingConfig};

    #[test]
    fn doubling_amplitude_rescales_shot_and_back_action() {
        let osc = presets::membrane_oscillator(Default::default());
        let cav = presets::membrane_cavity(2e-3);
        let model = SimplifiedModel::mirror(&cav);
        let omega = 0.6 * osc.resonance();
        let shot_only = QuadraturePsdTriple { yy: 0.5, xx: 0.0, xy: 0.0 };
        let ba_only = QuadraturePsdTriple { yy: 0.0, xx: 0.5, xy: 0.0 };
        let doubled = SimplifiedModel {
            input_amplitude: 2.0 * model.input_amplitude,
            ..model
        };
        let s1 = model.noise_psd(&osc, &shot_only, Some(0.0), omega).unwrap();
        let s2 = doubled.noise_psd(&osc, &shot_only, Some(0.0), omega).unwrap();
        assert!((s2 / s1 - 0.25).abs() < 1e-14);
        let b1 = model.noise_psd(&osc, &ba_only, Some(0.0), omega).unwrap();
        let b2 = doubled.noise_psd(&osc, &ba_only, Some(0.0), omega).unwrap();
        assert!((b2 / b1 - 4.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_structure() {
        let osc = presets::membrane_oscillator(Default::default());
        let cav = presets::membrane_cavity(1e-3);
        let model = SimplifiedModel::mirror(&cav);
        let omega = 1.3 * osc.resonance();
        let total = model
            .noise_psd(&osc, &QuadraturePsdTriple::VACUUM, Some(0.0), omega)
            .unwrap();
        let chi = mechanical_susceptibility(&osc, omega).value;
        let b_sq = (osc.mass() * osc.resonance()).powi(2)
            / (2.0 * model.input_amplitude.powi(2) * model.zeta.powi(2) * chi.norm_sqr());
        let kick = 2.0 * HBAR * cav.laser_omega() / C_LIGHT;
        let expected = 0.5 * b_sq + kick * kick * model.input_amplitude.powi(2);
        assert!((total / expected - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_zero_amplitude() {
        let osc = presets::membrane_oscillator(Default::default());
        assert!(simplified_model_noise_psd(1.0, 0.0, 1.0, &osc, &QuadraturePsdTriple::VACUUM, None, 1.0)
            .is_err());
    }

    #[test]
    fn fabry_perot_identity() {
        let osc = presets::membrane_oscillator(Default::default());
        let wl = CavityOpticsParams::laser_omega_from_wavelength(1.06e-6);
        let cav = CavityOpticsParams::fabry_perot(0.94e9, 0.94e9, 1e-3, wl, 2e-3, 1.0, &osc).unwrap();
        let map = bad_cavity_map(&cav, &osc);
        let fp = map.fabry_perot_zeta.unwrap();
        assert!((map.model.zeta / fp - 1.0).abs() < 1e-13);
        assert!(map.warning.is_none());
    }

    #[test]
    fn free_space_limit_is_twice_the_mirror_phase() {
        let osc = presets::membrane_oscillator(Default::default());
        let wl = CavityOpticsParams::laser_omega_from_wavelength(1.06e-6);
        let length = 0.05;
        let kappa = C_LIGHT / length;
        let cav = CavityOpticsParams::fabry_perot(kappa, kappa, length, wl, 1e-3, 1.0, &osc).unwrap();
        let map = bad_cavity_map(&cav, &osc);
        let mirror = SimplifiedModel::mirror(&cav);
        assert!((map.model.zeta / (4.0 * wl / C_LIGHT) - 1.0).abs() < 1e-12);
        assert!((map.model.zeta / mirror.zeta - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bad_cavity_correspondence() {
        let osc = presets::membrane_oscillator(Default::default());
        let cav = presets::membrane_cavity(2e-3);
        let map = bad_cavity_map(&cav, &osc);
        let sq = SqueezingConfig::from_db(10.0).unwrap();
        let top = cav.kappa() / 100.0;
        for i in 0..=400 {
            let omega = osc.resonance() * 1e-3 * (top / (osc.resonance() * 1e-3)).powf(i as f64 / 400.0);
            for theta in [0.0, 0.7, -1.1] {
                let q = input_quadrature_psds(&sq, theta);
                let cavity = single_sensor_noise_psd(&osc, &cav, &q, None, omega).unwrap();
                let simple = map.model.noise_psd(&osc, &q, None, omega).unwrap();
                assert!((simple / cavity - 1.0).abs() < 1e-2, "ω = {omega}: {simple} vs {cavity}");
            }
        }
    }
}
