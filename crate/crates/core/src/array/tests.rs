use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::numerics::golden_section_min;
use crate::presets;
use crate::spectra::{
    input_quadrature_psds, single_sensor_noise_psd, squeezed_noise_closed_form, CavityOpticsParams,
    OscillatorParams, QuadraturePsdTriple, SqueezingConfig,
};

fn sensor() -> Sensor {
    Sensor::new(
        presets::membrane_oscillator(Default::default()),
        presets::membrane_cavity(presets::POWER_PER_SENSOR_W),
    )
}

fn arb_sensor() -> impl Strategy<Value = Sensor> {
    (0.3f64..3.0, 0.3f64..3.0, 0.3f64..3.0, 0.0f64..3.0, 0.3f64..1.0, 0.5f64..2.0).prop_map(
        |(fm, fw, fq, t, eta, resp)| {
            let osc = OscillatorParams::from_quality(
                6e-6 * fm,
                2.0 * PI * 2000.0 * fw,
                1e9 * fq,
                0.01 * t,
                Default::default(),
            )
            .unwrap();
            let cav = presets::membrane_cavity(0.0).with_efficiency_sq(eta).unwrap();
            Sensor::new(osc, cav).with_response(resp)
        },
    )
}

fn arb_array() -> impl Strategy<Value = ArrayConfig> {
    (1usize..=4)
        .prop_flat_map(|m| {
            (
                proptest::collection::vec(arb_sensor(), m),
                proptest::collection::vec(0.05f64..1.0, m),
                proptest::collection::vec((0.05f64..1.0, -PI..PI), m),
                1e-3f64..2e-2,
            )
        })
        .prop_map(|(sensors, w, big_w, p)| {
            let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let dividing = w.iter().map(|x| Complex64::from(x / n)).collect();
            let combining = big_w.iter().map(|(a, ph)| Complex64::from_polar(*a, *ph)).collect();
            ArrayConfig::new(sensors, dividing, combining, p).unwrap()
        })
}

fn arb_omega() -> impl Strategy<Value = f64> {
    (-3.0f64..1.3).prop_map(|e| 2.0 * PI * 2000.0 * 10f64.powf(e))
}

#[test]
fn identical_array_reduces_to_single_sensor() {
    let s = sensor();
    let sq = SqueezingConfig::from_db(10.0).unwrap();
    for m in [1usize, 2, 4, 8, 16] {
        let cfg = ArrayConfig::identical(s, m, presets::POWER_PER_SENSOR_W).unwrap();
        for omega in [30.0, 0.5 * s.oscillator.resonance(), s.oscillator.resonance(), 1e5] {
            for q in [QuadraturePsdTriple::VACUUM, input_quadrature_psds(&sq, -0.4)] {
                let b = array_noise_psd(&cfg, &q, omega).unwrap();
                let single = single_sensor_noise_psd(&s.oscillator, &s.cavity, &q, None, omega).unwrap();
                assert!((b.total / single - 1.0).abs() < 1e-12, "M = {m}");
                assert!(b.residual_vacuum.abs() < 1e-12 * b.total);
                let sum = b.shot + b.back_action + b.correlation + b.thermal + b.residual_vacuum + b.loss;
                assert!((sum - b.total).abs() <= 1e-12 * b.total);
            }
        }
    }
}

#[test]
fn single_sensor_has_zero_residual() {
    let cfg = ArrayConfig::identical(sensor(), 1, 1e-3).unwrap();
    assert_eq!(residual_vacuum_psd(&cfg, 1e4).unwrap(), 0.0);
}

#[test]
fn detuned_pair_has_positive_residual() {
    let a = sensor();
    let mut b = sensor();
    b.oscillator = b.oscillator.with_resonance(1.3 * a.oscillator.resonance()).unwrap();
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let cfg = ArrayConfig::new(vec![a, b], vec![h, h], vec![h, h], 4e-3).unwrap();
    for omega in [100.0, 0.8 * a.oscillator.resonance(), 2e4, 1e5] {
        let res = residual_vacuum_psd(&cfg, omega).unwrap();
        assert!(res > 0.0, "ω = {omega}: {res}");
        let forms = residual_forms(&cfg, &coherent_sums(&cfg, omega).unwrap());
        assert!((forms.expanded - forms.delta_sum).abs() <= 1e-10 * forms.scale);
    }
}

#[test]
fn zero_readout_with_weight_is_rejected() {
    let dark = Sensor::new(sensor().oscillator, presets::membrane_cavity(0.0));
    let mut cav = dark.cavity;
    cav = CavityOpticsParams::new(cav.kappa(), cav.kappa_readout(), 0.0, cav.laser_omega(), 0.0, 1.0).unwrap();
    let dark = Sensor::new(dark.oscillator, cav);
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let cfg = ArrayConfig::new(vec![sensor(), dark], vec![h, h], vec![h, h], 4e-3).unwrap();
    assert!(matches!(
        array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, 1e4),
        Err(crate::Error::NoOpticalReadout { sensor: 1, .. })
    ));
    let muted = cfg.with_combining(vec![Complex64::from(1.0), Complex64::from(0.0)]).unwrap();
    let single = single_sensor_noise_psd(
        &sensor().oscillator,
        &sensor().cavity.with_power(2e-3).unwrap(),
        &QuadraturePsdTriple::VACUUM,
        None,
        1e4,
    )
    .unwrap();
    let b = array_noise_psd(&muted, &QuadraturePsdTriple::VACUUM, 1e4).unwrap();
    assert!((b.total / single - 1.0).abs() < 1e-12);
}

#[test]
fn identical_squeezed_array_matches_single_sensor() {
    let s = sensor();
    let r = SqueezingConfig::from_db(10.0).unwrap().strength();
    let cfg = ArrayConfig::identical(s, 6, presets::POWER_PER_SENSOR_W).unwrap();
    for omega in [200.0, 9e3, 4e4] {
        let arr = array_squeezed_noise(&cfg, r, -0.3, omega).unwrap().total;
        let single = squeezed_noise_closed_form(&s.oscillator, &s.cavity, r, -0.3, omega).unwrap();
        assert!((arr / single - 1.0).abs() < 1e-12);
    }
}

#[test]
fn angle_on_and_far_from_resonance() {
    let cfg = ArrayConfig::identical(sensor(), 3, presets::POWER_PER_SENSOR_W).unwrap();
    let w0 = sensor().oscillator.resonance();
    assert_eq!(optimal_squeezing_angle(&cfg, w0).unwrap(), -PI / 2.0);
    let below = optimal_squeezing_angle(&cfg, 0.1 * w0).unwrap();
    assert!(below < 0.0 && below > -PI / 2.0);
    let far = optimal_squeezing_angle(&cfg, 1e3 * w0).unwrap();
    assert!(far.abs() < 1e-2 && far > 0.0);
    let sums = coherent_sums(&cfg, 1e3 * w0).unwrap();
    let magnitude = AntiSqueezeMagnitude.angle(&sums, 0.0);
    assert!((magnitude + far).abs() < 1e-15);
}

#[test]
fn angle_minimizes_anti_squeezed_coefficient() {
    let s = sensor();
    let cfg = ArrayConfig::identical(s, 1, presets::POWER_PER_SENSOR_W).unwrap();
    let w0 = s.oscillator.resonance();
    for rel in [1e-3, 0.05, 0.3, 0.9, 0.999, 1.001, 1.2, 3.0, 20.0] {
        let sums = coherent_sums(&cfg, rel * w0).unwrap();
        let coeff = |t: f64| (sums.shot * t.sin() + sums.back_action * t.cos()).norm_sqr();
        let scale = sums.shot.norm_sqr() + sums.back_action.norm_sqr();
        let scan = (0..=200_000)
            .map(|i| -PI / 2.0 + PI * i as f64 / 200_000.0)
            .map(coeff)
            .fold(f64::INFINITY, f64::min);
        let (_, polished) = golden_section_min(coeff, -PI / 2.0, PI / 2.0, 1e-12);
        let best = scan.min(polished);
        let exact = coeff(AntiSqueezeExact.angle(&sums, 0.0));
        assert!((exact - best) / scale < 1e-12, "rel = {rel}");
        let reactive = coeff(AntiSqueeze.angle(&sums, 0.0));
        assert!((reactive - best) / scale < 1e-6, "rel = {rel}: {reactive} vs {best}");
    }
}

#[test]
fn snr_optimal_angle_minimizes_total() {
    let cfg = ArrayConfig::identical(sensor(), 2, presets::POWER_PER_SENSOR_W).unwrap();
    let r = SqueezingConfig::from_db(10.0).unwrap().strength();
    for omega in [10.0, 5e3, 12566.0, 2e4, 1e6] {
        let sums = coherent_sums(&cfg, omega).unwrap();
        let total = |t: f64| squeezed_from_sums(&cfg, &sums, r, t).total;
        let opt = total(SnrOptimal.angle(&sums, r));
        for i in 0..=2000 {
            let t = -PI / 2.0 + PI * i as f64 / 2000.0;
            assert!(opt <= total(t) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn squeezing_helps_where_optical_noise_dominates() {
    let s = sensor();
    let cfg = ArrayConfig::identical(s, 4, presets::POWER_PER_SENSOR_W).unwrap();
    let r = SqueezingConfig::from_db(10.0).unwrap().strength();
    let w0 = s.oscillator.resonance();
    for i in 0..=600 {
        let omega = w0 * 1e-3 * 1e5f64.powf(i as f64 / 600.0);
        let vac = array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, omega).unwrap();
        if vac.optical() <= vac.thermal {
            continue;
        }
        let sums = coherent_sums(&cfg, omega).unwrap();
        for policy in [&AntiSqueeze as &dyn AnglePolicy, &SnrOptimal] {
            let sq = squeezed_from_sums(&cfg, &sums, r, policy.angle(&sums, r)).total;
            assert!(sq <= vac.total * (1.0 + 1e-12), "{} at ω = {omega}", policy.name());
        }
    }
}

#[test]
fn array_sql_from_per_sensor_minimization() {
    let mut a = sensor();
    let mut b = sensor();
    a.oscillator = a.oscillator.with_temperature(0.0).unwrap();
    b.oscillator = OscillatorParams::from_quality(1.5e-5, 2.0 * PI * 3100.0, 3e8, 0.0, Default::default()).unwrap();
    let dividing = vec![Complex64::from(0.6), Complex64::from(0.8)];
    let combining = vec![Complex64::from(0.3), Complex64::new(0.2, 0.5)];
    for omega in [3e3, 12e3, 19e3, 4e4] {
        let mut total = 0.0;
        for k in 0..2 {
            let noise = |log_g: f64| {
                let mut sensors = vec![a, b];
                let c = sensors[k].cavity;
                sensors[k].cavity =
                    CavityOpticsParams::new(c.kappa(), c.kappa_readout(), log_g.exp(), c.laser_omega(), 0.0, 1.0)
                        .unwrap();
                let mut w = combining.clone();
                w[1 - k] = Complex64::from(0.0);
                let cfg = ArrayConfig::new(sensors, dividing.clone(), w, 1e-3).unwrap();
                array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, omega).unwrap().total
            };
            let (_, best) = golden_section_min(noise, -5.0, 25.0, 1e-10);
            total += best;
        }
        let cfg = ArrayConfig::new(vec![a, b], dividing.clone(), combining.clone(), 1e-3).unwrap();
        let sql = array_sql_psd(&cfg, omega);
        assert!((total / sql - 1.0).abs() < 1e-4, "{total} vs {sql}");
    }
}

#[test]
fn array_sql_simple_cases() {
    let s = sensor();
    let cfg = ArrayConfig::identical(s, 5, 1e-3).unwrap();
    let single = crate::spectra::sql_noise_psd(&s.oscillator, 1e4);
    assert!((array_sql_psd(&cfg, 1e4) / single - 1.0).abs() < 1e-14);
    let mut other = s;
    other.oscillator = other.oscillator.with_resonance(2e4).unwrap();
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let muted = ArrayConfig::new(vec![s, other], vec![h, h], vec![Complex64::from(0.0), Complex64::from(1.0)], 1e-3)
        .unwrap();
    let expected = crate::spectra::sql_noise_psd(&other.oscillator, 1e4);
    assert!((array_sql_psd(&muted, 1e4) / expected - 1.0).abs() < 1e-14);
}

#[test]
fn distributed_equals_independent_squeezing() {
    let sq = SqueezingConfig::from_db(10.0).unwrap();
    let omegas: Vec<f64> = (0..50).map(|i| 2.0 * PI * 10f64.powf(0.5 + 0.07 * i as f64)).collect();
    for m in [1usize, 2, 4, 8] {
        let cfg = ArrayConfig::identical(sensor(), m, presets::POWER_PER_SENSOR_W).unwrap();
        let report = dqs_vs_dcs_report(&cfg, &sq, &SnrOptimal, &omegas).unwrap();
        assert!(report.max_relative_difference < 1e-10);
        assert_eq!(report.photons_per_sensor_independent, sq.photons());
        assert!((report.photons_per_sensor_distributed * m as f64 - sq.photons()).abs() < 1e-12);
    }
    let mut other = sensor();
    other.response = 2.0;
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let mixed = ArrayConfig::new(vec![sensor(), other], vec![h, h], vec![h, h], 1e-3).unwrap();
    assert!(dqs_vs_dcs_report(&mixed, &sq, &SnrOptimal, &omegas).is_err());
}

#[test]
fn combining_registry() {
    let reg = combining_policies();
    let s = vec![sensor(); 3];
    let w = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::from(0.0)];
    let matched = reg.create("matched", &Default::default()).unwrap().weights(&s, &w, 1e-3).unwrap();
    assert_eq!(matched[1], Complex64::new(0.0, -0.8));
    let uniform = reg.create("uniform", &Default::default()).unwrap().weights(&s, &w, 1e-3).unwrap();
    assert!((uniform[2].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    let iv = reg.create("inverse-variance", &Default::default()).unwrap().weights(&s, &w, 1e-3).unwrap();
    assert!((iv.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-14);
    assert_eq!(iv[2], Complex64::from(0.0));
    assert!(reg.create("optimal", &Default::default()).is_err());
}

#[test]
fn inverse_variance_favours_quieter_sensor() {
    let a = sensor();
    let mut b = sensor();
    b.oscillator = b.oscillator.with_temperature(1.0).unwrap();
    let w = vec![Complex64::from(std::f64::consts::FRAC_1_SQRT_2); 2];
    let iv = InverseVariance { omega: None }.weights(&[a, b], &w, 4e-3).unwrap();
    assert!(iv[0].re > iv[1].re);
}

#[test]
fn angle_registry() {
    let reg = angle_policies();
    let names: Vec<_> = reg.names().collect();
    assert_eq!(
        names,
        ["anti-squeeze", "anti-squeeze-exact", "anti-squeeze-magnitude", "fixed", "snr-optimal"]
    );
    let mut p = crate::strategy::StrategyParams::new();
    p.insert("theta_rad".into(), 0.25);
    let cfg = ArrayConfig::identical(sensor(), 1, 1e-3).unwrap();
    let sums = coherent_sums(&cfg, 1e4).unwrap();
    assert_eq!(reg.create("fixed", &p).unwrap().angle(&sums, 1.0), 0.25);
    assert!(reg.create("fixed", &Default::default()).is_err());
}

proptest! {
    #[test]
    fn residual_forms_agree(cfg in arb_array(), omega in arb_omega()) {
        let forms = residual_forms(&cfg, &coherent_sums(&cfg, omega).unwrap());
        prop_assert!((forms.expanded - forms.delta_sum).abs() <= 1e-10 * forms.scale);
    }

    #[test]
    fn global_phase_invariance(cfg in arb_array(), omega in arb_omega(), phase in -PI..PI, r in 0.0f64..1.7, theta in -1.6f64..1.6) {
        let u = Complex64::from_polar(1.0, phase);
        let rotated = cfg.with_combining(cfg.combining().iter().map(|w| w * u).collect()).unwrap();
        let q = input_quadrature_psds(&SqueezingConfig::from_strength(r).unwrap(), theta);
        let a = array_noise_psd(&cfg, &q, omega).unwrap().total;
        let b = array_noise_psd(&rotated, &q, omega).unwrap().total;
        prop_assert!((a / b - 1.0).abs() < 1e-12);
        let sa = array_signal_psd(&cfg, 1.0);
        let sb = array_signal_psd(&rotated, 1.0);
        prop_assert!((sa - sb).abs() <= 1e-12 * sa);
    }

    #[test]
    fn squeezed_array_factorization(cfg in arb_array(), omega in arb_omega(), r in 0.0f64..1.8, theta in -3.2f64..3.2) {
        let closed = array_squeezed_noise(&cfg, r, theta, omega).unwrap().total;
        let q = input_quadrature_psds(&SqueezingConfig::from_strength(r).unwrap(), theta);
        let generic = array_noise_psd(&cfg, &q, omega).unwrap().total;
        prop_assert!((closed / generic - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parts_sum_to_total(cfg in arb_array(), omega in arb_omega()) {
        let b = array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, omega).unwrap();
        prop_assert!(b.shot >= 0.0 && b.back_action >= 0.0 && b.thermal >= 0.0 && b.loss >= 0.0);
        let sum = b.shot + b.back_action + b.correlation + b.thermal + b.residual_vacuum + b.loss;
        prop_assert!((sum - b.total).abs() <= 1e-12 * b.total);
    }
}
