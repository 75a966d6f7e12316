use crate::error::{Error, Result};

/// Squeezing strength of the primary optical input mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingConfig {
    r: f64,
}

impl SqueezingConfig {
    pub fn vacuum() -> Self {
        Self { r: 0.0 }
    }

    pub fn from_strength(r: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid("squeezing", format!("r = {r} must be ≥ 0")));
        }
        Ok(Self { r })
    }

    /// dB = 10·log₁₀(e^{2r}).
    pub fn from_db(db: f64) -> Result<Self> {
        if !(db >= 0.0 && db.is_finite()) {
            return Err(Error::invalid("squeezing_db", format!("{db} dB must be ≥ 0")));
        }
        Self::from_strength(db * std::f64::consts::LN_10 / 20.0)
    }

    /// From the mean squeezed-photon number N_s = sinh²r.
    pub fn from_photons(n_s: f64) -> Result<Self> {
        if !(n_s >= 0.0 && n_s.is_finite()) {
            return Err(Error::invalid("squeezed_photons", format!("N_s = {n_s} must be ≥ 0")));
        }
        // e^{r} = √N_s + √(N_s + 1)
        Self::from_strength((n_s.sqrt() + (n_s + 1.0).sqrt()).ln())
    }

    pub fn strength(&self) -> f64 {
        self.r
    }

    pub fn db(&self) -> f64 {
        20.0 * self.r / std::f64::consts::LN_10
    }

    pub fn photons(&self) -> f64 {
        let s = self.r.sinh();
        s * s
    }

    pub fn is_vacuum(&self) -> bool {
        self.r == 0.0
    }
}

/// Symmetrized PSDs of the input amplitude (X) and phase (Y) quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePsdTriple {
    pub yy: f64,
    pub xx: f64,
    /// S̃_XY, real by construction.
    pub xy: f64,
}

impl QuadraturePsdTriple {
    pub const VACUUM: QuadraturePsdTriple = QuadraturePsdTriple {
        yy: 0.5,
        xx: 0.5,
        xy: 0.0,
    };

    /// S̄_YY·S̄_XX − S̃_XY², equal to 1/4 for pure states.
    pub fn uncertainty_product(&self) -> f64 {
        self.yy * self.xx - self.xy * self.xy
    }
}

pub fn input_quadrature_psds(sq: &SqueezingConfig, theta: f64) -> QuadraturePsdTriple {
    let (s, c) = theta.sin_cos();
    let minus = (-2.0 * sq.r).exp();
    let plus = (2.0 * sq.r).exp();
    QuadraturePsdTriple {
        yy: 0.5 * (minus * c * c + plus * s * s),
        xx: 0.5 * (plus * c * c + minus * s * s),
        xy: 0.5 * c * s * (plus - minus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vacuum_is_half_half_zero() {
        for theta in [0.0, 0.3, -1.2, 2.0] {
            let q = input_quadrature_psds(&SqueezingConfig::vacuum(), theta);
            assert_eq!(q, QuadraturePsdTriple::VACUUM);
        }
    }

    #[test]
    fn ten_db_phase_squeezed() {
        let sq = SqueezingConfig::from_db(10.0).unwrap();
        assert!((sq.strength() - 0.5 * 10f64.ln()).abs() < 1e-15);
        let q = input_quadrature_psds(&sq, 0.0);
        assert!((q.yy - 0.05).abs() < 1e-15);
        assert!((q.xx - 5.0).abs() < 1e-14);
        assert_eq!(q.xy, 0.0);
    }

    #[test]
    fn photon_number_of_ten_db() {
        // 10 dB ↔ N_s ≈ 2.03 squeezed photons.
        let sq = SqueezingConfig::from_photons(2.03).unwrap();
        let e = (-2.0 * sq.strength()).exp();
        let expected = 1.0 / (2.03f64.sqrt() + 3.03f64.sqrt()).powi(2);
        assert!((e - expected).abs() < 1e-15);
        assert!((e - 0.0998).abs() < 5e-5);
        let ten = SqueezingConfig::from_db(10.0).unwrap();
        assert!((ten.photons() - 2.03).abs() < 0.01);
    }

    #[test]
    fn rejects_negative() {
        assert!(SqueezingConfig::from_strength(-0.1).is_err());
        assert!(SqueezingConfig::from_db(-3.0).is_err());
        assert!(SqueezingConfig::from_photons(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn pure_state_saturates_uncertainty(r in 0.0f64..2.0, theta in -3.2f64..3.2) {
            let q = input_quadrature_psds(&SqueezingConfig::from_strength(r).unwrap(), theta);
            prop_assert!(q.yy > 0.0 && q.xx > 0.0);
            prop_assert!((q.uncertainty_product() - 0.25).abs() < 1e-12 * (4.0 * r).exp());
        }

        #[test]
        fn photon_and_db_round_trip(r in 0.0f64..3.0) {
            let sq = SqueezingConfig::from_strength(r).unwrap();
            let back = SqueezingConfig::from_photons(sq.photons()).unwrap();
            prop_assert!((back.strength() - r).abs() < 1e-9);
            let db = SqueezingConfig::from_db(sq.db()).unwrap();
            prop_assert!((db.strength() - r).abs() < 1e-12);
        }
    }
}
