//! Broadband figures of merit and dark-matter coupling projections.

mod darkmatter;
mod grid;
mod integrated;
mod quadrature;
mod scan;
mod schemes;

pub use darkmatter::{
    calibrate_material_acceleration, min_detectable_coupling, min_detectable_coupling_from_density,
    snr_observation, CouplingAnchor, DarkMatterModel, ObservationPlan, DEFAULT_DENSITY_GEV_CM3,
    DEFAULT_LINEWIDTH_FRACTION, DEFAULT_THRESHOLD,
};
pub use grid::{
    resonance_refined_grid, FrequencyGrid, GridSpec, Resonance, COVERAGE_HALF_WIDTH,
    MIN_POINTS_PER_RESONANCE,
};
pub use integrated::{
    integrate_snr_density, integrated_sensitivity, sql_sensitivity_estimate, sql_sensitivity_exact,
};
pub use quadrature::{integrate_adaptive, QuadratureOptions, QuadratureResult};
pub use scan::{scan_curves, ArrayTemplate, PowerConvention, ScanAxis, ScanRecord, SensitivityModel};
pub use schemes::{
    detection_schemes, ClassicalCoherent, ClassicalIncoherent, ClassicalSql, DetectionScheme,
    DistributedSqueezing, DistributedSqueezingLimit, IndependentSqueezing, SchemeSetup, ThermalFloor,
};
