//! Single-sensor frequency-domain physics.
//!
//! All rates and frequencies are angular (rad/s). PSDs are symmetrized;
//! force PSDs are in N²/Hz and quadrature PSDs are dimensionless.

mod cavity;
mod params;
mod simplified;
mod squeezing;

pub use cavity::{
    cavity_phase_and_cooperativity, force_noise_breakdown, mechanical_susceptibility,
    noise_from_cooperativity, single_sensor_noise_psd, sql_noise_psd,
    squeezed_noise_closed_form, ComplexResponse, Cooperativity, NoiseBreakdown,
};
pub use params::{CavityOpticsParams, DampingConvention, OscillatorParams};
pub use simplified::{bad_cavity_map, simplified_model_noise_psd, BadCavityMap, SimplifiedModel};
pub use squeezing::{input_quadrature_psds, QuadraturePsdTriple, SqueezingConfig};
