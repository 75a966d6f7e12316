use num_complex::Complex64;

use super::params::{CavityOpticsParams, OscillatorParams};
use super::squeezing::{QuadraturePsdTriple, SqueezingConfig};
use crate::error::{Error, Result};

/// A complex response evaluated at one angular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexResponse {
    pub value: Complex64,
    pub omega: f64,
}

/// χ_ω = Ω/(Ω² − ω² − 2iγω).
pub fn mechanical_susceptibility(osc: &OscillatorParams, omega: f64) -> ComplexResponse {
    let w0 = osc.resonance();
    // (Ω − ω)(Ω + ω) keeps full precision next to the resonance.
    let denom = Complex64::new((w0 - omega) * (w0 + omega), -2.0 * osc.damping() * omega);
    ComplexResponse {
        value: Complex64::from(w0) / denom,
        omega,
    }
}

/// Cavity phase e^{iφ_ω} and optomechanical cooperativity C_ω at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cooperativity {
    pub omega: f64,
    /// e^{iφ_ω} = (κ/2 + iω)/(κ/2 − iω).
    pub phase: Complex64,
    /// e^{iφ_ω/2}, the branch with positive real part.
    pub half_phase: Complex64,
    pub value: Complex64,
}

impl Cooperativity {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }
}

/// `power_scale` is the fraction of the laser power reaching this sensor
/// (|w_k0|² inside an array, 1 for a standalone sensor).
pub fn cavity_phase_and_cooperativity(
    cav: &CavityOpticsParams,
    osc: &OscillatorParams,
    power_scale: f64,
    omega: f64,
) -> Result<Cooperativity> {
    if !(power_scale >= 0.0 && power_scale.is_finite()) {
        return Err(Error::invalid(
            "power_scale",
            format!("{power_scale} must be ≥ 0"),
        ));
    }
    let kappa = cav.kappa();
    let lead = Complex64::new(0.5 * kappa, omega);
    let half_phase = lead / lead.norm();
    let phase = lead / lead.conj();
    let dc = power_scale * 2.0 * cav.coupling_sq() / (osc.damping() * kappa);
    let roll = Complex64::new(1.0, -2.0 * omega / kappa);
    Ok(Cooperativity {
        omega,
        phase,
        half_phase,
        value: Complex64::from(dc) / (roll * roll),
    })
}

/// Term-by-term force-noise PSD (N²/Hz).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseBreakdown {
    pub shot: f64,
    pub back_action: f64,
    pub correlation: f64,
    pub thermal: f64,
    /// Extra measurement noise from detection loss 1 − η².
    pub loss: f64,
    pub total: f64,
}

impl NoiseBreakdown {
    pub fn optical(&self) -> f64 {
        self.shot + self.back_action + self.correlation + self.loss
    }
}

/// Single-sensor force noise for a given cooperativity magnitude |C_ω|.
///
/// `bath_psd` is S̄_PP; `None` selects the thermal value K_B·T/(ħΩ).
pub fn force_noise_breakdown(
    osc: &OscillatorParams,
    coop_magnitude: f64,
    efficiency_sq: f64,
    input: &QuadraturePsdTriple,
    bath_psd: Option<f64>,
    omega: f64,
) -> Result<NoiseBreakdown> {
    if !(coop_magnitude > 0.0) {
        return Err(Error::NoOpticalReadout { sensor: 0, omega });
    }
    let chi = mechanical_susceptibility(osc, omega).value;
    let chi_sq = chi.norm_sqr();
    let scale = osc.hbar_m_omega();
    let gamma = osc.damping();
    let shot_unit = scale / (8.0 * gamma * coop_magnitude * chi_sq);

    let shot = shot_unit * input.yy;
    let back_action = 8.0 * scale * gamma * coop_magnitude * input.xx;
    // 2ħmΩ/|χ|·Re(χ/|χ|)·S̃ = 2ħmΩ·Re(χ)/|χ|²·S̃
    let correlation = 2.0 * scale * chi.re / chi_sq * input.xy;
    let thermal = osc.thermal_force_psd(bath_psd.unwrap_or_else(|| osc.thermal_occupation()));
    let loss = (1.0 - efficiency_sq) / efficiency_sq * 0.5 * shot_unit;
    Ok(NoiseBreakdown {
        shot,
        back_action,
        correlation,
        thermal,
        loss,
        total: shot + back_action + correlation + thermal + loss,
    })
}

pub fn noise_from_cooperativity(
    osc: &OscillatorParams,
    coop_magnitude: f64,
    efficiency_sq: f64,
    input: &QuadraturePsdTriple,
    bath_psd: Option<f64>,
    omega: f64,
) -> Result<f64> {
    force_noise_breakdown(osc, coop_magnitude, efficiency_sq, input, bath_psd, omega)
        .map(|b| b.total)
}

/// Full single-sensor force-noise PSD (N²/Hz) for a generic Gaussian input.
pub fn single_sensor_noise_psd(
    osc: &OscillatorParams,
    cav: &CavityOpticsParams,
    input: &QuadraturePsdTriple,
    bath_psd: Option<f64>,
    omega: f64,
) -> Result<f64> {
    let coop = cavity_phase_and_cooperativity(cav, osc, 1.0, omega)?;
    noise_from_cooperativity(
        osc,
        coop.magnitude(),
        cav.efficiency_sq(),
        input,
        bath_psd,
        omega,
    )
}

/// Squeezed-input noise written directly in e^{∓2r} form, thermal bath at K_B·T/(ħΩ).
pub fn squeezed_noise_closed_form(
    osc: &OscillatorParams,
    cav: &CavityOpticsParams,
    r: f64,
    theta: f64,
    omega: f64,
) -> Result<f64> {
    SqueezingConfig::from_strength(r)?;
    let coop = cavity_phase_and_cooperativity(cav, osc, 1.0, omega)?.magnitude();
    if !(coop > 0.0) {
        return Err(Error::NoOpticalReadout { sensor: 0, omega });
    }
    let chi = mechanical_susceptibility(osc, omega).value;
    let gamma = osc.damping();
    let k = 8.0 * gamma * coop;
    let (s, c) = theta.sin_cos();
    let squeezed = (Complex64::from(c) - k * chi * s).norm_sqr();
    let anti = (Complex64::from(s) + k * chi * c).norm_sqr();
    let unit = osc.hbar_m_omega() / (16.0 * gamma * coop * chi.norm_sqr());
    let eta_sq = cav.efficiency_sq();
    let loss = (1.0 - eta_sq) / eta_sq * unit;
    let thermal = 4.0 * osc.mass() * gamma * crate::constants::K_B * osc.temperature();
    Ok(unit * (squeezed * (-2.0 * r).exp() + anti * (2.0 * r).exp()) + thermal + loss)
}

/// ħmΩ/|χ_ω|, optical part only.
pub fn sql_noise_psd(osc: &OscillatorParams, omega: f64) -> f64 {
    osc.hbar_m_omega() / mechanical_susceptibility(osc, omega).value.norm()
}

// Squeezed input followed by the generic path.
#[cfg(test)]
fn squeezed_generic(
    osc: &OscillatorParams,
    cav: &CavityOpticsParams,
    r: f64,
    theta: f64,
    omega: f64,
) -> Result<f64> {
    let q = super::squeezing::input_quadrature_psds(&SqueezingConfig::from_strength(r)?, theta);
    single_sensor_noise_psd(osc, cav, &q, None, omega)
}
