//! Physical constants (SI, CODATA 2018 exact values where defined).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// One GeV/c² in kilograms.
pub const GEV_IN_KG: f64 = 1.782_661_921e-27;

/// Seconds in a Julian year.
pub const YEAR_S: f64 = 365.25 * 86_400.0;

/// Converts a mass density in GeV/cm³ to kg/m³.
pub fn gev_per_cm3_to_kg_per_m3(rho: f64) -> f64 {
    rho * GEV_IN_KG * 1.0e6
}

/// Converts a frequency in Hz to an angular frequency in rad/s.
#[inline]
pub fn hz_to_rad(f: f64) -> f64 {
    2.0 * std::f64::consts::PI * f
}

#[inline]
pub fn rad_to_hz(w: f64) -> f64 {
    w / (2.0 * std::f64::consts::PI)
}
