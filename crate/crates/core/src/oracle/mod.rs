//! Brute-force reference for the array noise formulas.
//!
//! Every input quadrature of the network (laser mode and idle beam-splitter
//! ports, mechanical baths, detection-loss ports) gets one column of a linear
//! map to the combined force estimate. The output PSD is the quadratic form
//! of that row with the input spectral covariance, symmetrized over ±ω.
//!
//! Nothing here calls into the closed-form array code; the per-sensor
//! responses are re-evaluated from the raw parameters.

mod suite;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::array::ArrayConfig;
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::spectra::SqueezingConfig;

pub use suite::{random_array, run_random_suite, SuiteOptions, SuiteReport};

/// Optical state entering the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalInput {
    /// One squeezed mode split by the beam-splitter network; the other
    /// M − 1 ports carry vacuum.
    Distributed { squeezing: SqueezingConfig, theta: f64 },
    /// Each sensor receives its own squeezed vacuum, with no beam-splitter mixing.
    Independent { squeezing: SqueezingConfig, theta: f64 },
}

impl OpticalInput {
    pub fn vacuum() -> Self {
        OpticalInput::Distributed {
            squeezing: SqueezingConfig::vacuum(),
            theta: 0.0,
        }
    }
}

/// Choice of the columns completing w to a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdleSeed {
    /// Canonical basis vectors in order.
    #[default]
    Canonical,
    /// Columns of a random complex matrix drawn from this seed.
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Scale each detected quadrature into a force estimate with unit signal gain.
    pub force_conversion: bool,
    pub idle_seed: IdleSeed,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            force_conversion: true,
            idle_seed: IdleSeed::Canonical,
        }
    }
}

/// Column layout: X_0…X_{M−1}, Y_0…Y_{M−1}, P_0…P_{M−1}, V_0…V_{M−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnLayout {
    pub sensors: usize,
}

impl ColumnLayout {
    pub fn width(&self) -> usize {
        4 * self.sensors
    }

    pub fn amplitude(&self, j: usize) -> usize {
        j
    }

    pub fn phase(&self, j: usize) -> usize {
        self.sensors + j
    }

    pub fn momentum(&self, k: usize) -> usize {
        2 * self.sensors + k
    }

    pub fn loss(&self, k: usize) -> usize {
        3 * self.sensors + k
    }
}

/// Linear map from inputs to the combined estimate at +ω and −ω.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferAssembly {
    pub omega: f64,
    pub layout: ColumnLayout,
    /// Response of the combined output to a unit drive on each sensor.
    pub signal: DVector<Complex64>,
    pub noise_pos: DVector<Complex64>,
    pub noise_neg: DVector<Complex64>,
    /// Coefficients on the post-splitter quadratures (X′_0…, Y′_0…) at ±ω,
    /// used by the projector form of the idle-port noise.
    pub primed_pos: DVector<Complex64>,
    pub primed_neg: DVector<Complex64>,
    /// Beam-splitter column feeding mode 0; `None` for independent inputs.
    pub mode_zero: Option<DVector<Complex64>>,
    /// Symmetrized input covariance.
    pub covariance: DMatrix<f64>,
    /// Commutator matrix J, [q_i, q_j] = iJ_ij.
    pub commutator: DMatrix<f64>,
}

impl TransferAssembly {
    /// Assembly from raw parts; `layout` is inferred from the row length.
    pub fn from_parts(
        omega: f64,
        noise_pos: DVector<Complex64>,
        noise_neg: DVector<Complex64>,
        covariance: DMatrix<f64>,
        commutator: DMatrix<f64>,
    ) -> Self {
        let n = noise_pos.len();
        Self {
            omega,
            layout: ColumnLayout { sensors: n / 4 },
            signal: DVector::zeros(0),
            noise_pos,
            noise_neg,
            primed_pos: DVector::zeros(0),
            primed_neg: DVector::zeros(0),
            mode_zero: None,
            covariance,
            commutator,
        }
    }
}

/// Unitary whose first column is `w`, completed by Gram–Schmidt.
pub fn complete_unitary(w: &[Complex64], seed: IdleSeed) -> Result<DMatrix<Complex64>> {
    let m = w.len();
    let basis: Vec<DVector<Complex64>> = match seed {
        IdleSeed::Canonical => (0..m)
            .map(|j| DVector::from_fn(m, |i, _| Complex64::from(if i == j { 1.0 } else { 0.0 })))
            .collect(),
        IdleSeed::Random(s) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
            (0..m)
                .map(|_| DVector::from_fn(m, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect()
        }
    };
    let first = DVector::from_column_slice(w);
    if (first.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::UnnormalizedWeights { norm_sq: first.norm_squared() });
    }
    let mut cols = vec![first];
    for v in basis {
        if cols.len() == m {
            break;
        }
        let mut u = v;
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&u);
                u -= c * proj;
            }
        }
        let n = u.norm();
        if n > 1e-8 {
            cols.push(u / Complex64::from(n));
        }
    }
    if cols.len() < m {
        return Err(Error::InvalidArray("seed basis does not span the sensor space".into()));
    }
    Ok(DMatrix::from_columns(&cols))
}

struct SensorResponse {
    phase: Complex64,
    chi: Complex64,
    coop: Complex64,
}

fn sensor_response(cfg: &ArrayConfig, k: usize, omega: f64) -> SensorResponse {
    let s = &cfg.sensors()[k];
    let osc = &s.oscillator;
    let cav = &s.cavity;
    let (w0, g) = (osc.resonance(), osc.damping());
    let chi = Complex64::from(w0) / Complex64::new((w0 - omega) * (w0 + omega), -2.0 * g * omega);
    let kappa = cav.kappa();
    let phase = Complex64::new(kappa / 2.0, omega) / Complex64::new(kappa / 2.0, -omega);
    let flux = cfg.total_power() / (HBAR * cav.laser_omega());
    let intracavity = 4.0 * cav.kappa_readout() / (kappa * kappa) * flux;
    let dc = cfg.dividing()[k].norm_sqr() * 2.0 * cav.g0().powi(2) * intracavity / (g * kappa);
    let roll = Complex64::new(1.0, -2.0 * omega / kappa);
    SensorResponse {
        phase,
        chi,
        coop: dc / (roll * roll),
    }
}

/// Rows of the combined estimate at one signed frequency.
fn assemble_rows(
    cfg: &ArrayConfig,
    unitary: &DMatrix<Complex64>,
    opts: &OracleOptions,
    omega: f64,
) -> Result<(DVector<Complex64>, DVector<Complex64>, DVector<Complex64>)> {
    let m = cfg.len();
    let layout = ColumnLayout { sensors: m };
    let mut row: DVector<Complex64> = DVector::zeros(layout.width());
    let mut primed: DVector<Complex64> = DVector::zeros(2 * m);
    let mut signal: DVector<Complex64> = DVector::zeros(m);
    for k in 0..m {
        // W_{0k} acts as a filter response at +ω, so a real output needs W* at −ω.
        let big_w = if omega < 0.0 {
            cfg.combining()[k].conj()
        } else {
            cfg.combining()[k]
        };
        let s = &cfg.sensors()[k];
        let osc = &s.oscillator;
        let resp = sensor_response(cfg, k, omega);
        let gamma = osc.damping();
        let eta_sq = s.cavity.efficiency_sq();
        let eta = eta_sq.sqrt();
        let sqrt_coop = resp.coop.sqrt();
        // Q = 2√γ·χ·(P + f/√(4ħmγΩ)); Y_out = −e^{iφ}Y′ + 2√(2γ)√C′·Q − 8γC′χX′
        let position_gain = 2.0 * (2.0 * gamma).sqrt() * sqrt_coop * 2.0 * gamma.sqrt() * resp.chi;
        let bath = (4.0 * HBAR * osc.mass() * gamma * osc.resonance()).sqrt();
        let scale = if opts.force_conversion {
            if position_gain.norm() == 0.0 {
                if big_w.norm() == 0.0 {
                    continue;
                }
                return Err(Error::NoOpticalReadout { sensor: k, omega });
            }
            bath / (position_gain * eta)
        } else {
            Complex64::from(1.0)
        };
        let c = big_w * scale;
        // detected: ηY_out + √(1 − η²)V
        let coeff_y = -resp.phase * eta;
        let coeff_x = -8.0 * gamma * resp.coop * resp.chi * eta;
        primed[k] += c * coeff_x;
        primed[m + k] += c * coeff_y;
        row[layout.momentum(k)] += c * position_gain * eta;
        row[layout.loss(k)] += c * (1.0 - eta_sq).max(0.0).sqrt();
        signal[k] = c * position_gain * eta / bath * s.response;
    }
    // X′ = Re(U)X − Im(U)Y, Y′ = Im(U)X + Re(U)Y
    for k in 0..m {
        for j in 0..m {
            let u = unitary[(k, j)];
            row[layout.amplitude(j)] += primed[k] * u.re + primed[m + k] * u.im;
            row[layout.phase(j)] += -primed[k] * u.im + primed[m + k] * u.re;
        }
    }
    Ok((row, primed, signal))
}

/// Build the transfer rows and input covariance at ω.
pub fn assemble_transfer(
    cfg: &ArrayConfig,
    input: &OpticalInput,
    opts: &OracleOptions,
    omega: f64,
) -> Result<TransferAssembly> {
    let m = cfg.len();
    let layout = ColumnLayout { sensors: m };
    let (unitary, squeezed_modes, squeezing, theta) = match *input {
        OpticalInput::Distributed { squeezing, theta } => {
            (complete_unitary(cfg.dividing(), opts.idle_seed)?, 1, squeezing, theta)
        }
        OpticalInput::Independent { squeezing, theta } => (DMatrix::identity(m, m), m, squeezing, theta),
    };
    let (noise_pos, primed_pos, signal) = assemble_rows(cfg, &unitary, opts, omega)?;
    let (noise_neg, primed_neg, _) = assemble_rows(cfg, &unitary, opts, -omega)?;

    // Quadratures of a vacuum squeezed by r along θ: rotate diag(e^{2r}, e^{−2r})/2.
    let r = squeezing.strength();
    let (s, c) = theta.sin_cos();
    let (grow, shrink) = ((2.0 * r).exp(), (-2.0 * r).exp());
    let xx = 0.5 * (grow * c * c + shrink * s * s);
    let yy = 0.5 * (shrink * c * c + grow * s * s);
    let xy = 0.5 * c * s * (grow - shrink);

    let n = layout.width();
    let mut cov = DMatrix::zeros(n, n);
    let mut comm = DMatrix::zeros(n, n);
    for j in 0..m {
        let (a, p) = (layout.amplitude(j), layout.phase(j));
        if j < squeezed_modes {
            cov[(a, a)] = xx;
            cov[(p, p)] = yy;
            cov[(a, p)] = xy;
            cov[(p, a)] = xy;
        } else {
            cov[(a, a)] = 0.5;
            cov[(p, p)] = 0.5;
        }
        comm[(a, p)] = 1.0;
        comm[(p, a)] = -1.0;
        let osc = &cfg.sensors()[j].oscillator;
        cov[(layout.momentum(j), layout.momentum(j))] = osc.thermal_occupation();
        cov[(layout.loss(j), layout.loss(j))] = 0.5;
    }
    Ok(TransferAssembly {
        omega,
        layout,
        signal,
        noise_pos,
        noise_neg,
        primed_pos,
        primed_neg,
        mode_zero: (squeezed_modes == 1).then(|| unitary.column(0).into_owned()),
        covariance: cov,
        commutator: comm,
    })
}

/// n†(Σ + (i/2)J)n, the one-sided spectrum at a single signed frequency.
fn one_sided(n: &DVector<Complex64>, cov: &DMatrix<f64>, comm: &DMatrix<f64>) -> Complex64 {
    let mut acc = Complex64::from(0.0);
    for i in 0..n.len() {
        for j in 0..n.len() {
            let m = Complex64::new(cov[(i, j)], 0.5 * comm[(i, j)]);
            if m != Complex64::from(0.0) {
                acc += n[i].conj() * m * n[j];
            }
        }
    }
    acc
}

/// Symmetrized output PSD, averaging the one-sided spectra at ±ω.
pub fn propagate_covariance(t: &TransferAssembly) -> f64 {
    let pos = one_sided(&t.noise_pos, &t.covariance, &t.commutator);
    let neg = one_sided(&t.noise_neg, &t.covariance, &t.commutator);
    0.5 * (pos + neg).re
}

/// Same PSD through the eigendecomposition of the covariance; the commutator
/// part is dropped since it cancels between ±ω.
pub fn propagate_covariance_eigen(t: &TransferAssembly) -> f64 {
    let eig = SymmetricEigen::new(t.covariance.clone());
    let mut total = 0.0;
    for (i, lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let project = |n: &DVector<Complex64>| -> f64 {
            n.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<Complex64>().norm_sqr()
        };
        total += lambda * 0.5 * (project(&t.noise_pos) + project(&t.noise_neg));
    }
    total
}

/// Oracle PSD split by input block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleBreakdown {
    /// Phase quadrature of mode 0.
    pub shot: f64,
    /// Amplitude quadrature of mode 0.
    pub back_action: f64,
    pub correlation: f64,
    /// All optical columns of modes 1…M−1.
    pub idle: f64,
    pub thermal: f64,
    pub loss: f64,
    pub total: f64,
}

fn sym_pair(t: &TransferAssembly, i: usize, j: usize) -> f64 {
    let f = |n: &DVector<Complex64>| (n[i].conj() * n[j]).re;
    0.5 * (f(&t.noise_pos) + f(&t.noise_neg))
}

pub fn oracle_breakdown(t: &TransferAssembly) -> OracleBreakdown {
    let l = t.layout;
    let cov = &t.covariance;
    let (a0, p0) = (l.amplitude(0), l.phase(0));
    let shot = sym_pair(t, p0, p0) * cov[(p0, p0)];
    let back_action = sym_pair(t, a0, a0) * cov[(a0, a0)];
    let correlation = 2.0 * sym_pair(t, a0, p0) * cov[(a0, p0)];
    let mut idle = 0.0;
    for j in 1..l.sensors {
        let (a, p) = (l.amplitude(j), l.phase(j));
        idle += sym_pair(t, a, a) * cov[(a, a)] + sym_pair(t, p, p) * cov[(p, p)] + 2.0 * sym_pair(t, a, p) * cov[(a, p)];
    }
    let mut thermal = 0.0;
    let mut loss = 0.0;
    for k in 0..l.sensors {
        thermal += sym_pair(t, l.momentum(k), l.momentum(k)) * cov[(l.momentum(k), l.momentum(k))];
        loss += sym_pair(t, l.loss(k), l.loss(k)) * cov[(l.loss(k), l.loss(k))];
    }
    OracleBreakdown {
        shot,
        back_action,
        correlation,
        idle,
        thermal,
        loss,
        total: propagate_covariance(t),
    }
}

/// Idle-port vacuum noise from the projector onto the complement of the
/// mode-0 column, without building the idle columns. Vacuum idle ports only.
pub fn idle_projector_psd(t: &TransferAssembly) -> Option<f64> {
    let w = t.mode_zero.as_ref()?;
    let m = t.layout.sensors;
    let part = |g: &DVector<Complex64>| {
        let full = g.norm_squared();
        let on_x: Complex64 = (0..m).map(|k| g[k] * w[k].re + g[m + k] * w[k].im).sum();
        let on_y: Complex64 = (0..m).map(|k| -g[k] * w[k].im + g[m + k] * w[k].re).sum();
        0.5 * (full - on_x.norm_sqr() - on_y.norm_sqr())
    };
    Some(0.5 * (part(&t.primed_pos) + part(&t.primed_neg)))
}

/// Oracle force-noise PSD of `cfg` at ω.
pub fn oracle_noise_psd(cfg: &ArrayConfig, input: &OpticalInput, omega: f64) -> Result<f64> {
    Ok(propagate_covariance(&assemble_transfer(cfg, input, &OracleOptions::default(), omega)?))
}
