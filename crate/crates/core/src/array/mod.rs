//! Sensor-array network algebra.
//!
//! A laser beam, possibly squeezed, is split by a beam-splitter network with
//! first column w_{k0}; each sensor's force estimate F_k is combined as
//! Σ_k W_{0k}F_k. Sensor k sees cooperativity C′_k = |w_{k0}|²·C_k(P_tot).

mod angle;
mod combining;
mod config;
mod noise;

pub use angle::{
    angle_policies, optimal_squeezing_angle, AnglePolicy, AntiSqueeze, AntiSqueezeExact,
    AntiSqueezeMagnitude, FixedAngle, SnrOptimal,
};
pub use combining::{combining_policies, CombiningPolicy, InverseVariance, Matched, Uniform};
pub use config::{
    array_signal_psd, incoherent_baseline, signal_gain, validate_network, ArrayConfig,
    NetworkDiagnostics, Sensor, NORMALIZATION_TOL,
};
pub use noise::{
    array_noise_psd, array_squeezed_noise, array_sql_psd, array_thermal_psd, breakdown_from_sums,
    coherent_sums, dqs_vs_dcs_report, independent_squeezed_noise, residual_forms,
    residual_vacuum_psd, sensor_amplitudes, squeezed_from_sums, CoherentSums,
    CombinedNoiseBreakdown, DqsDcsReport, ResidualForms, SensorAmplitudes, SqueezedNoiseBreakdown,
};

#[cfg(test)]
mod tests;
