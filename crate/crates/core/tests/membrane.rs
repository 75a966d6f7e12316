use optoarray_core::array::{array_noise_psd, ArrayConfig, Sensor};
use optoarray_core::oracle::{oracle_noise_psd, OpticalInput};
use optoarray_core::presets::{membrane_cavity, membrane_oscillator, POWER_PER_SENSOR_W};
use optoarray_core::spectra::{
    cavity_phase_and_cooperativity, DampingConvention, QuadraturePsdTriple,
};

#[test]
fn membrane_cooperativity_is_finite_and_matches_oracle() {
    for convention in [DampingConvention::Half, DampingConvention::Full] {
        let osc = membrane_oscillator(convention);
        let cav = membrane_cavity(POWER_PER_SENSOR_W);
        let omega0 = osc.resonance();
        for omega in [0.01 * omega0, 0.5 * omega0, omega0, omega0 + osc.damping(), 30.0 * omega0] {
            let c = cavity_phase_and_cooperativity(&cav, &osc, 1.0, omega).unwrap();
            assert!(c.magnitude().is_finite() && c.magnitude() > 0.0);
        }
        let cfg = ArrayConfig::identical(Sensor::new(osc, cav), 1, POWER_PER_SENSOR_W).unwrap();
        for omega in [0.1 * omega0, omega0, 3.0 * omega0] {
            let closed = array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, omega).unwrap().total;
            let oracle = oracle_noise_psd(&cfg, &OpticalInput::vacuum(), omega).unwrap();
            assert!((closed / oracle - 1.0).abs() < 1e-9, "{convention} at {omega}: {closed} vs {oracle}");
        }
    }
}
