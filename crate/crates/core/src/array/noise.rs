use num_complex::Complex64;

use super::config::{ArrayConfig, Sensor};
use crate::error::{Error, Result};
use crate::spectra::{
    cavity_phase_and_cooperativity, input_quadrature_psds, mechanical_susceptibility,
    QuadraturePsdTriple, SqueezingConfig,
};

/// Per-sensor noise amplitudes at one frequency.
///
/// The sensor's force estimate reads
/// F_k = f_k − shot_k·Y'_k − back_action_k·X'_k + thermal noise,
/// with X'_k, Y'_k the quadratures entering its cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorAmplitudes {
    pub chi: Complex64,
    pub half_phase: Complex64,
    /// |C′_k|, the cooperativity at the sensor's share of the power.
    pub coop_magnitude: f64,
    /// e^{iφ/2}/(2χ)·√(ħmΩ/(2γ|C′|))
    pub shot: Complex64,
    /// 2e^{iφ/2}·√(2ħmΩγ|C′|)
    pub back_action: Complex64,
    /// 4ħmγΩ·K_BT/(ħΩ)
    pub thermal: f64,
    /// ((1−η²)/η²)·ħmΩ/(16γ|C′||χ|²)
    pub loss: f64,
}

pub fn sensor_amplitudes(sensor: &Sensor, power: f64, index: usize, omega: f64) -> Result<SensorAmplitudes> {
    let osc = &sensor.oscillator;
    let cav = sensor.cavity.with_power(power)?;
    let coop = cavity_phase_and_cooperativity(&cav, osc, 1.0, omega)?;
    let c = coop.magnitude();
    if !(c > 0.0) {
        return Err(Error::NoOpticalReadout { sensor: index, omega });
    }
    let chi = mechanical_susceptibility(osc, omega).value;
    let hm = crate::constants::HBAR * osc.mass() * osc.resonance();
    let gamma = osc.damping();
    let eta_sq = cav.efficiency_sq();
    Ok(SensorAmplitudes {
        chi,
        half_phase: coop.half_phase,
        coop_magnitude: c,
        shot: coop.half_phase / (2.0 * chi) * (hm / (2.0 * gamma * c)).sqrt(),
        back_action: coop.half_phase * 2.0 * (2.0 * hm * gamma * c).sqrt(),
        thermal: osc.thermal_force_psd(osc.thermal_occupation()),
        loss: (1.0 - eta_sq) / eta_sq * hm / (16.0 * gamma * c * chi.norm_sqr()),
    })
}

/// Coherent sums over the array at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentSums {
    pub omega: f64,
    /// P = Σ_k shot_k·W_{0k}w_{k0}
    pub shot: Complex64,
    /// R = Σ_k back_action_k·W_{0k}w_{k0}
    pub back_action: Complex64,
    /// P with 1/χ_k replaced by Re(1/χ_k) = (Ω_k² − ω²)/Ω_k.
    pub shot_reactive: Complex64,
    /// Per-sensor amplitudes; `None` where W_{0k} = 0 and the sensor is dark.
    pub sensors: Vec<Option<SensorAmplitudes>>,
}

pub fn coherent_sums(cfg: &ArrayConfig, omega: f64) -> Result<CoherentSums> {
    let mut shot = Complex64::from(0.0);
    let mut back_action = Complex64::from(0.0);
    let mut shot_reactive = Complex64::from(0.0);
    let mut sensors = Vec::with_capacity(cfg.len());
    for (k, sensor) in cfg.sensors().iter().enumerate() {
        let big_w = cfg.combining()[k];
        let w = cfg.dividing()[k];
        let amps = match sensor_amplitudes(sensor, cfg.sensor_power(k), k, omega) {
            Ok(a) => a,
            Err(Error::NoOpticalReadout { .. }) if big_w.norm() == 0.0 => {
                sensors.push(None);
                continue;
            }
            Err(e) => return Err(e),
        };
        let route = big_w * w;
        shot += amps.shot * route;
        back_action += amps.back_action * route;
        let osc = &sensor.oscillator;
        let w0 = osc.resonance();
        let reactive = (w0 - omega) * (w0 + omega) / w0;
        shot_reactive += amps.shot * amps.chi * reactive * route;
        sensors.push(Some(amps));
    }
    Ok(CoherentSums {
        omega,
        shot,
        back_action,
        shot_reactive,
        sensors,
    })
}

/// Term-by-term array force-noise PSD (N²/Hz).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CombinedNoiseBreakdown {
    pub shot: f64,
    pub back_action: f64,
    pub correlation: f64,
    pub thermal: f64,
    pub residual_vacuum: f64,
    pub loss: f64,
    pub total: f64,
}

impl CombinedNoiseBreakdown {
    pub fn optical(&self) -> f64 {
        self.shot + self.back_action + self.correlation
    }

    /// A residual below −10⁻⁹·total points at a phase convention problem
    /// rather than round-off.
    pub fn residual_sign_warning(&self) -> bool {
        self.residual_vacuum < -1e-9 * self.total.abs()
    }
}

/// Both evaluations of the idle-port vacuum noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualForms {
    /// Σ_k |W_{0k}|²(|shot_k|² + |back_action_k|²)/2 − (|P|² + |R|²)/2
    pub expanded: f64,
    /// ½ Σ_{jk} Δ_{jk}(v_j*v_k + u_j*u_k) with Δ_{jk} = δ_{jk} − w_{j0}w*_{k0}
    pub delta_sum: f64,
    /// Σ_k |W_{0k}|²(|shot_k|² + |back_action_k|²)/2, the scale both forms cancel against.
    pub scale: f64,
}

pub fn residual_forms(cfg: &ArrayConfig, sums: &CoherentSums) -> ResidualForms {
    let m = cfg.len();
    let mut v = vec![Complex64::from(0.0); m];
    let mut u = vec![Complex64::from(0.0); m];
    for (k, amps) in sums.sensors.iter().enumerate() {
        if let Some(a) = amps {
            v[k] = cfg.combining()[k] * a.shot;
            u[k] = cfg.combining()[k] * a.back_action;
        }
    }
    let scale = 0.5 * v.iter().chain(&u).map(|x| x.norm_sqr()).sum::<f64>();
    let expanded = scale - 0.5 * (sums.shot.norm_sqr() + sums.back_action.norm_sqr());

    let w = cfg.dividing();
    let mut delta_sum = 0.0;
    for j in 0..m {
        for k in 0..m {
            let delta = if j == k { 1.0 } else { 0.0 } - w[j] * w[k].conj();
            delta_sum += (delta * (v[j].conj() * v[k] + u[j].conj() * u[k])).re;
        }
    }
    ResidualForms {
        expanded,
        delta_sum: 0.5 * delta_sum,
        scale,
    }
}

/// Noise from the M − 1 idle beam-splitter ports.
pub fn residual_vacuum_psd(cfg: &ArrayConfig, omega: f64) -> Result<f64> {
    let sums = coherent_sums(cfg, omega)?;
    Ok(checked_residual(cfg, &sums))
}

fn checked_residual(cfg: &ArrayConfig, sums: &CoherentSums) -> f64 {
    let forms = residual_forms(cfg, sums);
    debug_assert!(
        (forms.expanded - forms.delta_sum).abs() <= 1e-10 * forms.scale.max(f64::MIN_POSITIVE),
        "residual forms disagree: {forms:?}"
    );
    if cfg.len() == 1 {
        0.0
    } else {
        forms.expanded
    }
}

fn weighted_incoherent(cfg: &ArrayConfig, sums: &CoherentSums) -> (f64, f64) {
    sums.sensors
        .iter()
        .zip(cfg.combining())
        .filter_map(|(a, w)| a.map(|a| (a, w.norm_sqr())))
        .fold((0.0, 0.0), |(th, loss), (a, w2)| (th + w2 * a.thermal, loss + w2 * a.loss))
}

/// Symmetrized array force-noise PSD for a given mode-0 input state.
pub fn array_noise_psd(cfg: &ArrayConfig, input: &QuadraturePsdTriple, omega: f64) -> Result<CombinedNoiseBreakdown> {
    let sums = coherent_sums(cfg, omega)?;
    Ok(breakdown_from_sums(cfg, &sums, input))
}

pub fn breakdown_from_sums(cfg: &ArrayConfig, sums: &CoherentSums, input: &QuadraturePsdTriple) -> CombinedNoiseBreakdown {
    let shot = sums.shot.norm_sqr() * input.yy;
    let back_action = sums.back_action.norm_sqr() * input.xx;
    let correlation = 2.0 * (sums.shot.conj() * sums.back_action).re * input.xy;
    let (thermal, loss) = weighted_incoherent(cfg, sums);
    let residual_vacuum = checked_residual(cfg, sums);
    CombinedNoiseBreakdown {
        shot,
        back_action,
        correlation,
        thermal,
        residual_vacuum,
        loss,
        total: shot + back_action + correlation + thermal + residual_vacuum + loss,
    }
}

/// Array noise with squeezed mode-0 input, in e^{∓2r} form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SqueezedNoiseBreakdown {
    /// ½|P cosθ − R sinθ|²·e^{−2r}
    pub squeezed: f64,
    /// ½|P sinθ + R cosθ|²·e^{2r}
    pub anti_squeezed: f64,
    pub thermal: f64,
    pub residual_vacuum: f64,
    pub loss: f64,
    pub total: f64,
}

pub fn array_squeezed_noise(cfg: &ArrayConfig, r: f64, theta: f64, omega: f64) -> Result<SqueezedNoiseBreakdown> {
    SqueezingConfig::from_strength(r)?;
    let sums = coherent_sums(cfg, omega)?;
    Ok(squeezed_from_sums(cfg, &sums, r, theta))
}

pub fn squeezed_from_sums(cfg: &ArrayConfig, sums: &CoherentSums, r: f64, theta: f64) -> SqueezedNoiseBreakdown {
    let (s, c) = theta.sin_cos();
    let (p, big_r) = (sums.shot, sums.back_action);
    let squeezed = 0.5 * (p * c - big_r * s).norm_sqr() * (-2.0 * r).exp();
    let anti_squeezed = 0.5 * (p * s + big_r * c).norm_sqr() * (2.0 * r).exp();
    let (thermal, loss) = weighted_incoherent(cfg, sums);
    let residual_vacuum = checked_residual(cfg, sums);
    SqueezedNoiseBreakdown {
        squeezed,
        anti_squeezed,
        thermal,
        residual_vacuum,
        loss,
        total: squeezed + anti_squeezed + thermal + residual_vacuum + loss,
    }
}

/// Σ_k |W_{0k}|²·ħm_kΩ_k/|χ_k|, optical part only.
pub fn array_sql_psd(cfg: &ArrayConfig, omega: f64) -> f64 {
    cfg.sensors()
        .iter()
        .zip(cfg.combining())
        .map(|(s, w)| w.norm_sqr() * crate::spectra::sql_noise_psd(&s.oscillator, omega))
        .sum()
}

/// Σ_k |W_{0k}|²·4m_kγ_kK_BT_k.
pub fn array_thermal_psd(cfg: &ArrayConfig) -> f64 {
    cfg.sensors()
        .iter()
        .zip(cfg.combining())
        .map(|(s, w)| w.norm_sqr() * s.oscillator.thermal_force_psd(s.oscillator.thermal_occupation()))
        .sum()
}

/// Noise of M independently squeezed sensors combined with weights W.
///
/// Sensor k keeps its share |w_k0|² of the power and receives its own
/// squeezed vacuum of strength r at angle θ.
pub fn independent_squeezed_noise(cfg: &ArrayConfig, r: f64, theta: f64, omega: f64) -> Result<f64> {
    let q = input_quadrature_psds(&SqueezingConfig::from_strength(r)?, theta);
    let mut total = 0.0;
    for (k, sensor) in cfg.sensors().iter().enumerate() {
        let w2 = cfg.combining()[k].norm_sqr();
        if w2 == 0.0 {
            continue;
        }
        let a = sensor_amplitudes(sensor, cfg.sensor_power(k), k, omega)?;
        let p = a.shot;
        let b = a.back_action;
        let optical = p.norm_sqr() * q.yy + b.norm_sqr() * q.xx + 2.0 * (p.conj() * b).re * q.xy;
        total += w2 * (optical + a.thermal + a.loss);
    }
    Ok(total)
}

/// Distributed single squeezer versus one squeezer per sensor.
#[derive(Debug, Clone, PartialEq)]
pub struct DqsDcsReport {
    /// (ω, distributed, independent)
    pub points: Vec<(f64, f64, f64)>,
    pub max_relative_difference: f64,
    pub photons_per_sensor_distributed: f64,
    pub photons_per_sensor_independent: f64,
}

/// Compare the two schemes at `omegas`, squeezing angle chosen per frequency.
pub fn dqs_vs_dcs_report(
    cfg: &ArrayConfig,
    squeezing: &SqueezingConfig,
    angle: &dyn super::AnglePolicy,
    omegas: &[f64],
) -> Result<DqsDcsReport> {
    if !cfg.is_identical() {
        return Err(Error::HeterogeneousArray(
            "distributed and independent squeezing are compared for identical sensors only".into(),
        ));
    }
    let r = squeezing.strength();
    let mut points = Vec::with_capacity(omegas.len());
    let mut worst: f64 = 0.0;
    for &omega in omegas {
        let sums = coherent_sums(cfg, omega)?;
        let theta = angle.angle(&sums, r);
        let dqs = squeezed_from_sums(cfg, &sums, r, theta).total;
        let dcs = independent_squeezed_noise(cfg, r, theta, omega)?;
        worst = worst.max((dqs / dcs - 1.0).abs());
        points.push((omega, dqs, dcs));
    }
    let n = squeezing.photons();
    Ok(DqsDcsReport {
        points,
        max_relative_difference: worst,
        photons_per_sensor_distributed: n / cfg.len() as f64,
        photons_per_sensor_independent: n,
    })
}
