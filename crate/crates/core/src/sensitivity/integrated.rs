use super::grid::FrequencyGrid;
use super::quadrature::{integrate_adaptive, QuadratureOptions, QuadratureResult};
use crate::error::{Error, Result};
use crate::spectra::OscillatorParams;

/// ∫ (S_dr/S_noise)² dω/π over the grid span.
pub fn integrated_sensitivity<S, N>(
    signal_psd: S,
    noise_psd: N,
    grid: &FrequencyGrid,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    S: Fn(f64) -> Result<f64> + Sync,
    N: Fn(f64) -> Result<f64> + Sync,
{
    grid.validate()?;
    integrate_adaptive(
        |omega| {
            let noise = noise_psd(omega)?;
            if !(noise > 0.0) {
                return Err(Error::NonPositiveNoise { omega, value: noise });
            }
            let ratio = signal_psd(omega)? / noise;
            Ok(ratio * ratio / std::f64::consts::PI)
        },
        grid.points(),
        opts,
    )
}

/// ∫ ρ(ω)² dω/π for a signal-to-noise density ρ already per unit drive.
pub fn integrate_snr_density<F>(density: F, grid: &FrequencyGrid, opts: &QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.validate()?;
    integrate_adaptive(
        |omega| {
            let d = density(omega)?;
            Ok(d * d / std::f64::consts::PI)
        },
        grid.points(),
        opts,
    )
}

/// Closed-form estimate 4γ·S_dr²/(ħmΩγ)², built on an on-resonance SQL of ħmΩγ/2.
pub fn sql_sensitivity_estimate(osc: &OscillatorParams, drive_psd: f64) -> f64 {
    let g = osc.damping();
    let s = crate::constants::HBAR * osc.mass() * osc.resonance() * g;
    4.0 * g * drive_psd * drive_psd / (s * s)
}

/// Exact value for an SQL-limited, thermal-free sensor: with S = ħmΩ/|χ|,
/// ∫|χ|²dω/π over the full line is 1/(4γ), so I = S_dr²/(4γ(ħmΩ)²).
pub fn sql_sensitivity_exact(osc: &OscillatorParams, drive_psd: f64) -> f64 {
    let hm = crate::constants::HBAR * osc.mass() * osc.resonance();
    drive_psd * drive_psd / (4.0 * osc.damping() * hm * hm)
}
