//! Membrane accelerometer parameters used by the shipped figure scenarios.
//!
//! 6 mg membrane, Ω = 2π·2 kHz, Q = 10⁹, T = 10 mK, read out by a 1 mm
//! cavity with κ = 0.94·10⁹ rad/s (finesse ≈ 1000), G₀ = 46 rad/s, and a
//! 1.06 µm laser.

use std::f64::consts::PI;

use crate::spectra::{CavityOpticsParams, DampingConvention, OscillatorParams};

pub const MEMBRANE_MASS_KG: f64 = 6e-6;
pub const MEMBRANE_RESONANCE_HZ: f64 = 2000.0;
pub const MEMBRANE_QUALITY: f64 = 1e9;
pub const MEMBRANE_TEMPERATURE_K: f64 = 0.01;
pub const CAVITY_KAPPA_RAD_S: f64 = 0.94e9;
pub const CAVITY_G0_RAD_S: f64 = 46.0;
pub const LASER_WAVELENGTH_M: f64 = 1.06e-6;
pub const POWER_PER_SENSOR_W: f64 = 2e-3;

pub fn membrane_oscillator(convention: DampingConvention) -> OscillatorParams {
    OscillatorParams::from_quality(
        MEMBRANE_MASS_KG,
        2.0 * PI * MEMBRANE_RESONANCE_HZ,
        MEMBRANE_QUALITY,
        MEMBRANE_TEMPERATURE_K,
        convention,
    )
    .expect("preset oscillator is valid")
}

pub fn membrane_cavity(power: f64) -> CavityOpticsParams {
    CavityOpticsParams::new(
        CAVITY_KAPPA_RAD_S,
        CAVITY_KAPPA_RAD_S,
        CAVITY_G0_RAD_S,
        CavityOpticsParams::laser_omega_from_wavelength(LASER_WAVELENGTH_M),
        power,
        1.0,
    )
    .expect("preset cavity is valid")
}
