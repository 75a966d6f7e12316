//! Randomized comparison of the closed-form array noise against the oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    assemble_transfer, idle_projector_psd, oracle_breakdown, propagate_covariance_eigen, IdleSeed,
    OpticalInput, OracleOptions,
};
use crate::array::{array_noise_psd, ArrayConfig, Sensor};
use crate::error::Result;
use crate::presets;
use crate::spectra::{input_quadrature_psds, CavityOpticsParams, OscillatorParams, SqueezingConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub configs: usize,
    pub frequencies: usize,
    pub max_sensors: usize,
    pub max_squeezing_db: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            configs: 200,
            frequencies: 50,
            max_sensors: 4,
            max_squeezing_db: 15.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub configs: usize,
    pub evaluations: usize,
    /// Closed-form total against oracle total.
    pub max_total_error: f64,
    /// Largest labeled-block mismatch, relative to the total.
    pub max_block_error: f64,
    /// Direct quadratic form against the eigendecomposition path.
    pub max_eigen_error: f64,
    /// Explicit idle columns against the projector shortcut, relative to the total.
    pub max_projector_error: f64,
    /// Oracle totals under two different idle-column completions.
    pub max_completion_error: f64,
    pub min_oracle_psd: f64,
    /// (config index, ω) of the largest total error.
    pub worst: Option<(usize, f64)>,
}

fn spread(rng: &mut ChaCha8Rng, decades: f64) -> f64 {
    10f64.powf(rng.gen_range(-decades..decades))
}

/// Random heterogeneous array around the membrane preset: every mechanical
/// parameter within ×10, real positive dividing weights, complex combining
/// weights. Also returns a squeezing configuration and angle.
pub fn random_array(rng: &mut ChaCha8Rng, max_sensors: usize, max_db: f64) -> (ArrayConfig, SqueezingConfig, f64) {
    let m = rng.gen_range(1..=max_sensors);
    let sensors: Vec<Sensor> = (0..m)
        .map(|_| {
            let osc = OscillatorParams::from_quality(
                presets::MEMBRANE_MASS_KG * spread(rng, 1.0),
                2.0 * PI * presets::MEMBRANE_RESONANCE_HZ * spread(rng, 1.0),
                presets::MEMBRANE_QUALITY * spread(rng, 1.0),
                presets::MEMBRANE_TEMPERATURE_K * spread(rng, 1.0),
                Default::default(),
            )
            .expect("sampled oscillator is valid");
            let kappa = presets::CAVITY_KAPPA_RAD_S * spread(rng, 0.5);
            let cav = CavityOpticsParams::new(
                kappa,
                kappa * rng.gen_range(0.5..=1.0),
                presets::CAVITY_G0_RAD_S * spread(rng, 0.5),
                CavityOpticsParams::laser_omega_from_wavelength(presets::LASER_WAVELENGTH_M),
                0.0,
                rng.gen_range(0.5..=1.0),
            )
            .expect("sampled cavity is valid");
            Sensor::new(osc, cav).with_response(rng.gen_range(0.5..2.0))
        })
        .collect();
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dividing = raw.iter().map(|x| Complex64::from(x / norm)).collect();
    let combining = (0..m)
        .map(|_| Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(-PI..PI)))
        .collect();
    let power = m as f64 * presets::POWER_PER_SENSOR_W * spread(rng, 1.0);
    let cfg = ArrayConfig::new(sensors, dividing, combining, power).expect("sampled array is valid");
    let sq = SqueezingConfig::from_db(rng.gen_range(0.0..=max_db)).expect("non-negative dB");
    let theta = rng.gen_range(-PI / 2.0..PI / 2.0);
    (cfg, sq, theta)
}

fn sample_frequencies(rng: &mut ChaCha8Rng, cfg: &ArrayConfig, n: usize) -> Vec<f64> {
    let res: Vec<f64> = cfg.sensors().iter().map(|s| s.oscillator.resonance()).collect();
    let lo = res.iter().cloned().fold(f64::INFINITY, f64::min) * 1e-3;
    let kappa = cfg.sensors().iter().map(|s| s.cavity.kappa()).fold(f64::INFINITY, f64::min);
    let hi = (res.iter().cloned().fold(0.0, f64::max) * 1e3).min(kappa / 10.0);
    (0..n)
        .map(|i| {
            if i % 5 == 4 {
                // inside ±20 linewidths of a resonance
                let s = &cfg.sensors()[rng.gen_range(0..cfg.len())].oscillator;
                s.resonance() + rng.gen_range(-20.0..20.0) * s.damping()
            } else {
                lo * (hi / lo).powf(rng.gen::<f64>())
            }
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn check_config(index: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index as u64);
    let (cfg, sq, theta) = random_array(&mut rng, opts.max_sensors, opts.max_squeezing_db);
    let q = input_quadrature_psds(&sq, theta);
    let input = OpticalInput::Distributed { squeezing: sq, theta };
    let alt = OracleOptions {
        idle_seed: IdleSeed::Random(opts.seed ^ index as u64),
        ..OracleOptions::default()
    };
    let mut report = SuiteReport {
        configs: 1,
        min_oracle_psd: f64::INFINITY,
        ..Default::default()
    };
    for omega in sample_frequencies(&mut rng, &cfg, opts.frequencies) {
        let closed = array_noise_psd(&cfg, &q, omega)?;
        let t = assemble_transfer(&cfg, &input, &OracleOptions::default(), omega)?;
        let o = oracle_breakdown(&t);
        let total_err = rel(closed.total, o.total);
        if total_err > report.max_total_error || report.worst.is_none() {
            report.worst = Some((index, omega));
        }
        report.max_total_error = report.max_total_error.max(total_err);
        let blocks = [
            (closed.shot, o.shot),
            (closed.back_action, o.back_action),
            (closed.correlation, o.correlation),
            (closed.residual_vacuum, o.idle),
            (closed.thermal, o.thermal),
            (closed.loss, o.loss),
        ];
        for (c, b) in blocks {
            report.max_block_error = report.max_block_error.max((c - b).abs() / o.total);
        }
        report.max_eigen_error = report.max_eigen_error.max(rel(propagate_covariance_eigen(&t), o.total));
        if let Some(idle) = idle_projector_psd(&t) {
            report.max_projector_error = report.max_projector_error.max((idle - o.idle).abs() / o.total);
        }
        let other = super::propagate_covariance(&assemble_transfer(&cfg, &input, &alt, omega)?);
        report.max_completion_error = report.max_completion_error.max(rel(other, o.total));
        report.min_oracle_psd = report.min_oracle_psd.min(o.total);
        report.evaluations += 1;
    }
    Ok(report)
}

/// Run the randomized suite; configurations are checked in parallel and the
/// result does not depend on the thread count.
pub fn run_random_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let reports = (0..opts.configs)
        .into_par_iter()
        .map(|i| check_config(i, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut out = SuiteReport {
        min_oracle_psd: f64::INFINITY,
        ..Default::default()
    };
    for r in reports {
        out.configs += r.configs;
        out.evaluations += r.evaluations;
        if r.max_total_error > out.max_total_error || out.worst.is_none() {
            out.worst = r.worst;
        }
        out.max_total_error = out.max_total_error.max(r.max_total_error);
        out.max_block_error = out.max_block_error.max(r.max_block_error);
        out.max_eigen_error = out.max_eigen_error.max(r.max_eigen_error);
        out.max_projector_error = out.max_projector_error.max(r.max_projector_error);
        out.max_completion_error = out.max_completion_error.max(r.max_completion_error);
        out.min_oracle_psd = out.min_oracle_psd.min(r.min_oracle_psd);
    }
    Ok(out)
}
