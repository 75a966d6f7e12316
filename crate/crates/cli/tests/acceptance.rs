//! Acceptance criteria 1 to 10, one PASS/FAIL line each. Exits non-zero on any failure.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command as Process;
use std::time::Instant;

use optoarray_cli::presets::{preset, PRESETS};
use optoarray_cli::table::Table;
use optoarray_cli::{run, Command, RunOptions};
use optoarray_core::array::{
    angle_policies, array_noise_psd, array_squeezed_noise, dqs_vs_dcs_report, ArrayConfig, Sensor,
};
use optoarray_core::numerics::golden_section_min;
use optoarray_core::oracle::{random_array, run_random_suite, SuiteOptions};
use optoarray_core::presets::{membrane_cavity, membrane_oscillator, POWER_PER_SENSOR_W};
use optoarray_core::spectra::{
    force_noise_breakdown, input_quadrature_psds, mechanical_susceptibility, single_sensor_noise_psd, sql_noise_psd,
    squeezed_noise_closed_form, CavityOpticsParams, DampingConvention, OscillatorParams, QuadraturePsdTriple,
    SqueezingConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn run_preset(name: &str, opts: &RunOptions) -> optoarray_cli::RunOutput {
    let (source, command) = preset(name).expect("preset exists");
    run(command, &source, opts).expect("preset runs")
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    t.column(name)
        .unwrap_or_else(|| panic!("column {name}"))
        .into_iter()
        .map(|x| x.expect("no failed points"))
        .collect()
}

fn c1_oracle() -> Outcome {
    let start = Instant::now();
    let opts = SuiteOptions::default();
    let r = run_random_suite(&opts).expect("suite runs");
    let secs = start.elapsed().as_secs_f64();
    outcome(
        r.max_total_error < 1e-9 && secs < 60.0 && r.configs == 200,
        format!(
            "max rel err {:.2e} (< 1e-9) over {} configs x {} frequencies, M <= {}, <= {} dB, {:.1} s",
            r.max_total_error, r.configs, opts.frequencies, opts.max_sensors, opts.max_squeezing_db, secs
        ),
    )
}

fn c2_identity() -> Outcome {
    let mut worst_total: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let osc = membrane_oscillator(DampingConvention::Half);
    let cav = membrane_cavity(POWER_PER_SENSOR_W);
    let sensor = Sensor::new(osc, cav);
    let inputs = [
        QuadraturePsdTriple::VACUUM,
        input_quadrature_psds(&SqueezingConfig::from_db(10.0).unwrap(), 0.3),
    ];
    for m in [1, 2, 4, 8, 16] {
        let cfg = ArrayConfig::identical(sensor, m, POWER_PER_SENSOR_W).unwrap();
        for f in [0.05, 0.5, 0.999, 1.0, 1.001, 7.0, 300.0] {
            let omega = f * osc.resonance();
            for input in &inputs {
                let array = array_noise_psd(&cfg, input, omega).unwrap();
                let single = single_sensor_noise_psd(&osc, &cav, input, None, omega).unwrap();
                worst_total = worst_total.max(rel(array.total, single));
                worst_residual = worst_residual.max(array.residual_vacuum.abs() / array.total);
            }
        }
    }
    outcome(
        worst_total < 1e-12 && worst_residual < 1e-12,
        format!("max rel diff {worst_total:.2e}, max residual/total {worst_residual:.2e} (< 1e-12), M in {{1,2,4,8,16}}"),
    )
}

fn c3_scaling() -> Outcome {
    let out = run_preset("fig2", &RunOptions::default());
    let t = &out.tables[0];
    let m = column(t, "sensors");
    let coh = column(t, "classical_coherent");
    let inc = column(t, "classical_incoherent");
    let dqs = column(t, "dqs_10db");
    let (mut e_coh, mut e_inc): (f64, f64) = (0.0, 0.0);
    let factors: Vec<f64> = dqs.iter().zip(&coh).map(|(d, c)| d / c).collect();
    for i in 0..m.len() {
        e_coh = e_coh.max(rel(coh[i] / coh[0], m[i] * m[i]));
        e_inc = e_inc.max(rel(inc[i] / inc[0], m[i]));
    }
    let spread = factors.iter().map(|f| rel(*f, factors[0])).fold(0.0, f64::max);
    outcome(
        e_coh < 1e-6 && e_inc < 1e-6 && spread < 1e-2 && factors[0] > 1.0 && m[0] == 1.0 && *m.last().unwrap() == 100.0,
        format!(
            "M^2 err {e_coh:.2e}, M err {e_inc:.2e} (< 1e-6); DQS/coherent = {:.4} with spread {spread:.2e} (< 1%) over M in [1, 100]",
            factors[0]
        ),
    )
}

fn c4_dqs_dcs() -> Outcome {
    let sensor = Sensor::new(membrane_oscillator(DampingConvention::Half), membrane_cavity(POWER_PER_SENSOR_W));
    let omega0 = sensor.oscillator.resonance();
    let omegas: Vec<f64> = [0.01, 0.1, 0.5, 0.99, 1.0, 1.01, 2.0, 10.0, 100.0].iter().map(|f| f * omega0).collect();
    let registry = angle_policies();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for m in [2, 4, 8] {
        let cfg = ArrayConfig::identical(sensor, m, POWER_PER_SENSOR_W).unwrap();
        for db in [3.0, 10.0, 15.0] {
            let sq = SqueezingConfig::from_db(db).unwrap();
            for name in ["anti-squeeze", "snr-optimal"] {
                let angle = registry.create(name, &Default::default()).unwrap();
                let r = dqs_vs_dcs_report(&cfg, &sq, angle.as_ref(), &omegas).unwrap();
                worst = worst.max(r.max_relative_difference);
                points += r.points.len();
            }
        }
    }
    outcome(worst < 1e-10, format!("max rel diff {worst:.2e} (< 1e-10) at {points} points, M in {{2,4,8}}"))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_single(rng: &mut ChaCha8Rng) -> (OscillatorParams, CavityOpticsParams) {
    let osc = OscillatorParams::from_quality(
        6e-6 * log_uniform(rng, 0.1, 10.0),
        2.0 * PI * 2000.0 * log_uniform(rng, 0.1, 10.0),
        1e9 * log_uniform(rng, 0.1, 10.0),
        0.01 * log_uniform(rng, 0.1, 10.0),
        DampingConvention::Half,
    )
    .unwrap();
    let cav = membrane_cavity(POWER_PER_SENSOR_W * log_uniform(rng, 1e-3, 1e3))
        .with_efficiency_sq(rng.gen_range(0.3..=1.0))
        .unwrap();
    (osc, cav)
}

fn random_omega(rng: &mut ChaCha8Rng, osc: &OscillatorParams, i: usize) -> f64 {
    if i % 5 == 0 {
        osc.resonance() + rng.gen_range(-20.0..20.0) * osc.damping()
    } else {
        log_uniform(rng, osc.resonance() * 1e-3, osc.resonance() * 1e3)
    }
}

fn c5_factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut single, mut array): (f64, f64) = (0.0, 0.0);
    for i in 0..1000 {
        let (osc, cav) = random_single(&mut rng);
        let r = rng.gen_range(0.0..15.0f64 * 10f64.ln() / 20.0);
        let theta = rng.gen_range(-PI / 2.0..PI / 2.0);
        let omega = random_omega(&mut rng, &osc, i);
        let q = input_quadrature_psds(&SqueezingConfig::from_strength(r).unwrap(), theta);
        let generic = single_sensor_noise_psd(&osc, &cav, &q, None, omega).unwrap();
        let closed = squeezed_noise_closed_form(&osc, &cav, r, theta, omega).unwrap();
        single = single.max(rel(closed, generic));

        let (cfg, sq, theta) = random_array(&mut rng, 4, 15.0);
        let osc0 = cfg.sensors()[0].oscillator;
        let omega = random_omega(&mut rng, &osc0, i);
        let generic = array_noise_psd(&cfg, &input_quadrature_psds(&sq, theta), omega).unwrap().total;
        let closed = array_squeezed_noise(&cfg, sq.strength(), theta, omega).unwrap().total;
        array = array.max(rel(closed, generic));
    }
    outcome(
        single < 1e-12 && array < 1e-12,
        format!("1000 draws: single-sensor max rel diff {single:.2e}, array {array:.2e} (< 1e-12)"),
    )
}

fn c6_sql() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut value_err, mut arg_err): (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let (osc, _) = random_single(&mut rng);
        let omega = random_omega(&mut rng, &osc, i);
        let noise = |log_c: f64| {
            force_noise_breakdown(&osc, log_c.exp(), 1.0, &QuadraturePsdTriple::VACUUM, Some(0.0), omega)
                .unwrap()
                .total
        };
        let (x, best) = golden_section_min(noise, -60.0, 60.0, 1e-12);
        let chi = mechanical_susceptibility(&osc, omega).value.norm();
        value_err = value_err.max(rel(best, sql_noise_psd(&osc, omega)));
        arg_err = arg_err.max(rel(x.exp(), 1.0 / (8.0 * osc.damping() * chi)));
    }
    outcome(
        value_err < 1e-6 && arg_err < 1e-6,
        format!("100 draws: min noise vs hbar m Omega/|chi| {value_err:.2e}, optimum |C| vs 1/(8 gamma |chi|) {arg_err:.2e} (< 1e-6)"),
    )
}

fn c7_published_numbers() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    let mut by_flag = Vec::new();
    for conv in [DampingConvention::Half, DampingConvention::Full] {
        let out = run_preset(
            "fig4",
            &RunOptions {
                gamma_convention: Some(conv),
                ..Default::default()
            },
        );
        pass &= out.manifest["gamma_convention"] == conv.name();
        by_flag.push(out.manifest["results"]["floors"].clone());
    }
    pass &= by_flag[0] == by_flag[1];
    let floors = &by_flag[0];
    for (key, label) in [
        ("thermal_acceleration_asd_m_s2_rthz", "(a) thermal floor"),
        ("on_resonance_acceleration_asd_m_s2_rthz", "(b) back-action floor"),
        ("shot_displacement_asd_m_rthz", "(c) shot displacement"),
    ] {
        let e = &floors[key];
        pass &= e["within_factor"].as_bool().unwrap();
        lines.push(format!(
            "{label} half {:.2e} full {:.2e} vs {:.0e}, closer {}",
            e["half"].as_f64().unwrap(),
            e["full"].as_f64().unwrap(),
            e["reference"].as_f64().unwrap(),
            e["closer"].as_str().unwrap()
        ));
    }
    outcome(pass, format!("{} (factor 3)", lines.join("; ")))
}

fn c8_anchor() -> Outcome {
    let out = run_preset("fig3", &RunOptions::default());
    let t = &out.tables[0];
    let f = column(t, "compton_hz");
    let thermal = column(t, "thermal_floor_m1_g_min");
    let single = column(t, "classical_m1_g_min");
    let coherent = column(t, "classical_coherent_m10_g_min");
    let dqs = column(t, "dqs_10db_m10_g_min");
    let i = f.iter().position(|&x| x == 2000.0).expect("anchor frequency is plotted");
    let anchor_err = rel(thermal[i], 4e-25);
    let ba_ratio = single[i] / 7e-24;
    let below = dqs.iter().zip(&coherent).all(|(d, c)| d < c);
    outcome(
        anchor_err < 1e-12 && ba_ratio < 3.0 && ba_ratio > 1.0 / 3.0 && below,
        format!(
            "thermal curve at anchor {:.6e} (rel err {anchor_err:.1e}); back-action point {:.2e} (x{ba_ratio:.2} of 7e-24); DQS below coherent at all {} frequencies: {below}",
            thermal[i],
            single[i],
            f.len()
        ),
    )
}

fn c9_convergence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (name, _, command) in PRESETS {
        let (source, _) = preset(name).unwrap();
        let s = run(Command::Sensitivity, &source, &RunOptions::default()).unwrap();
        let t = &s.tables[0];
        for c in ["tolerance_change", "grid_change"] {
            for v in column(t, c) {
                worst = worst.max(v);
                checked += 1;
            }
        }
        if matches!(command, Command::ArrayScan | Command::PowerScan | Command::LossScan) {
            let base = run(command, &source, &RunOptions::default()).unwrap();
            let tol = base.manifest["quadrature"]["rel_tol"].as_f64().unwrap();
            let halved = run(
                command,
                &source,
                &RunOptions {
                    tolerance: Some(tol / 2.0),
                    ..Default::default()
                },
            )
            .unwrap();
            let (a, b) = (&base.tables[0], &halved.tables[0]);
            for (j, col) in a.columns.iter().enumerate() {
                if col.ends_with("_error") || col == "resonance_noise_n2_hz" || j == 0 {
                    continue;
                }
                for (x, y) in column(a, col).iter().zip(column(b, col)) {
                    worst = worst.max(rel(y, *x));
                    checked += 1;
                }
            }
        }
    }
    outcome(worst < 1e-3, format!("max relative change {worst:.2e} (< 1e-3) over {checked} integrals from all presets"))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_optoarray");
    let tmp = tempfile::tempdir().unwrap();
    let run_to = |fig: &str, dir: &Path, threads: &str| {
        let status = Process::new(bin)
            .args([fig, "--out", dir.to_str().unwrap(), "--threads", threads])
            .env_remove("OPTOARRAY_FORMAT")
            .output()
            .unwrap()
            .status;
        assert!(status.success(), "{fig} failed");
    };
    let mut compared = 0;
    let mut identical = true;
    for (fig, _, _) in PRESETS {
        let a = tmp.path().join(format!("{fig}_a"));
        let b = tmp.path().join(format!("{fig}_b"));
        run_to(fig, &a, "1");
        run_to(fig, &b, "3");
        for entry in std::fs::read_dir(&a).unwrap() {
            let p = entry.unwrap().path();
            let name = p.file_name().unwrap();
            let x = std::fs::read(&p).unwrap();
            let y = std::fs::read(b.join(name)).unwrap();
            identical &= x == y;
            compared += 1;
        }
    }
    outcome(identical && compared >= 10, format!("{compared} files byte-identical across repeated runs (1 vs 3 threads): {identical}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", c1_oracle),
        ("identity reduction", c2_identity),
        ("scaling laws", c3_scaling),
        ("DQS = DCS", c4_dqs_dcs),
        ("squeezing factorization", c5_factorization),
        ("SQL optimality", c6_sql),
        ("published-number regressions", c7_published_numbers),
        ("dark-matter anchor", c8_anchor),
        ("quadrature self-convergence", c9_convergence),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
