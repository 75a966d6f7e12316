//! Scenario files: TOML with the unit spelled out in every physical key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use optoarray_core::array::{angle_policies, combining_policies, AnglePolicy, Sensor};
use optoarray_core::constants::{gev_per_cm3_to_kg_per_m3, hz_to_rad, YEAR_S};
use optoarray_core::sensitivity::{
    calibrate_material_acceleration, detection_schemes, ArrayTemplate, CouplingAnchor, DarkMatterModel,
    DetectionScheme, ObservationPlan, PowerConvention, QuadratureOptions, SensitivityModel,
    DEFAULT_DENSITY_GEV_CM3, DEFAULT_LINEWIDTH_FRACTION, DEFAULT_THRESHOLD,
};
use optoarray_core::spectra::{CavityOpticsParams, DampingConvention, OscillatorParams, SqueezingConfig};
use optoarray_core::strategy::StrategyParams;
use serde::Deserialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub oscillator: OscillatorBlock,
    pub cavity: CavityBlock,
    pub array: ArrayBlock,
    #[serde(default)]
    pub light: LightBlock,
    #[serde(default, rename = "curve")]
    pub curves: Vec<CurveBlock>,
    #[serde(default)]
    pub dark_matter: Option<DarkMatterBlock>,
    #[serde(default)]
    pub observation: ObservationBlock,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub scan: Option<ScanBlock>,
    #[serde(default)]
    pub noise: Option<NoiseBlock>,
    #[serde(default)]
    pub reference: Option<ReferenceBlock>,
    #[serde(default, rename = "overlay")]
    pub overlays: Vec<OverlayBlock>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OscillatorBlock {
    pub mass_kg: f64,
    pub resonance_hz: f64,
    #[serde(default)]
    pub quality: Option<f64>,
    #[serde(default)]
    pub damping_rad_s: Option<f64>,
    pub temperature_k: f64,
    #[serde(default)]
    pub gamma_convention: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CavityBlock {
    pub kappa_rad_s: f64,
    #[serde(default)]
    pub kappa_readout_rad_s: Option<f64>,
    pub g0_rad_s: f64,
    pub wavelength_m: f64,
    #[serde(default = "one")]
    pub efficiency_sq: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ArrayBlock {
    #[serde(default = "one_usize")]
    pub sensors: usize,
    pub power_w: f64,
    #[serde(default = "per_sensor")]
    pub power_convention: String,
    #[serde(default = "matched")]
    pub combining: String,
    #[serde(default)]
    pub combining_omega_hz: Option<f64>,
    #[serde(default)]
    pub dividing_weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LightBlock {
    #[serde(default)]
    pub squeezing_db: Option<f64>,
    #[serde(default)]
    pub squeezing_photons: Option<f64>,
    #[serde(default = "anti_squeeze")]
    pub angle: String,
    #[serde(default)]
    pub angle_rad: Option<f64>,
}

impl Default for LightBlock {
    fn default() -> Self {
        LightBlock {
            squeezing_db: None,
            squeezing_photons: None,
            angle: anti_squeeze(),
            angle_rad: None,
        }
    }
}

/// One output column: a detection scheme plus per-curve overrides.
#[derive(Debug, Clone, Deserialize)]
pub struct CurveBlock {
    pub label: String,
    pub scheme: String,
    #[serde(default)]
    pub sensors: Option<usize>,
    #[serde(default)]
    pub power_w: Option<f64>,
    #[serde(default)]
    pub squeezing_db: Option<f64>,
    #[serde(default)]
    pub squeezing_photons: Option<f64>,
    #[serde(default)]
    pub angle: Option<String>,
    #[serde(default)]
    pub angle_rad: Option<f64>,
    #[serde(default)]
    pub power_decades: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DarkMatterBlock {
    #[serde(default = "default_density")]
    pub density_gev_cm3: f64,
    #[serde(default = "default_linewidth_fraction")]
    pub linewidth_fraction: f64,
    pub compton_hz: f64,
    #[serde(default)]
    pub material_acceleration_m_s2: Option<f64>,
    #[serde(default)]
    pub anchor: Option<AnchorBlock>,
}

/// Either a number or `"thermal-floor"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AnchorNoise {
    Value(f64),
    Named(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct AnchorBlock {
    pub coupling: f64,
    pub acceleration_asd_m_s2_rthz: AnchorNoise,
    #[serde(default)]
    pub quoted_acceleration_asd_m_s2_rthz: Option<f64>,
    #[serde(default)]
    pub compton_hz: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ObservationBlock {
    #[serde(default = "one_year")]
    pub total_time_s: f64,
    #[serde(default)]
    pub integration_time_s: Option<f64>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

impl Default for ObservationBlock {
    fn default() -> Self {
        ObservationBlock {
            total_time_s: one_year(),
            integration_time_s: None,
            threshold: default_threshold(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct GridBlock {
    #[serde(default)]
    pub span_hz: Option<[f64; 2]>,
    #[serde(default = "default_ppd")]
    pub points_per_decade: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_intervals")]
    pub max_intervals: usize,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock {
            span_hz: None,
            points_per_decade: default_ppd(),
            tolerance: default_tolerance(),
            max_intervals: default_max_intervals(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct RangeBlock {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ScanBlock {
    /// `sensors`, `power_w`, `loss` or `compton_hz`.
    pub axis: String,
    #[serde(default)]
    pub values: Vec<f64>,
    #[serde(default)]
    pub log_range: Option<RangeBlock>,
    #[serde(default)]
    pub linear_range: Option<RangeBlock>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NoiseBlock {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub points: usize,
}

/// Quoted figures to compare against.
#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceBlock {
    #[serde(default)]
    pub thermal_acceleration_asd_m_s2_rthz: Option<f64>,
    #[serde(default)]
    pub back_action_acceleration_asd_m_s2_rthz: Option<f64>,
    #[serde(default)]
    pub shot_displacement_asd_m_rthz: Option<f64>,
    #[serde(default)]
    pub back_action_coupling: Option<f64>,
    #[serde(default = "default_reference_factor")]
    pub factor: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OverlayBlock {
    pub name: String,
    pub path: PathBuf,
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn per_sensor() -> String {
    "per-sensor".into()
}
fn matched() -> String {
    "matched".into()
}
fn anti_squeeze() -> String {
    "anti-squeeze".into()
}
fn default_density() -> f64 {
    DEFAULT_DENSITY_GEV_CM3
}
fn default_linewidth_fraction() -> f64 {
    DEFAULT_LINEWIDTH_FRACTION
}
fn one_year() -> f64 {
    YEAR_S
}
fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}
fn default_ppd() -> usize {
    50
}
fn default_tolerance() -> f64 {
    1e-6
}
fn default_max_intervals() -> usize {
    200_000
}
fn default_reference_factor() -> f64 {
    3.0
}

/// Raw scenario text plus where it came from.
#[derive(Debug, Clone)]
pub struct ScenarioSource {
    pub label: String,
    pub text: String,
    pub base_dir: PathBuf,
}

impl ScenarioSource {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(ScenarioSource {
            label: path.display().to_string(),
            text,
            base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        })
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(self.text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parse and collect unknown keys. Strict mode turns them into an error.
pub fn parse_scenario(text: &str, strict: bool) -> CliResult<(ScenarioFile, Vec<String>)> {
    let de = toml::Deserializer::parse(text).map_err(|e| CliError::Scenario(e.to_string()))?;
    let mut unknown = Vec::new();
    let file: ScenarioFile = serde_ignored::deserialize(de, |path| unknown.push(path.to_string()))
        .map_err(|e| CliError::Scenario(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(CliError::Scenario(format!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    if strict && !unknown.is_empty() {
        return Err(CliError::Scenario(format!("unknown keys: {}", unknown.join(", "))));
    }
    let warnings = unknown.into_iter().map(|k| format!("unknown scenario key `{k}` ignored")).collect();
    Ok((file, warnings))
}

#[derive(Clone)]
pub struct Curve {
    pub label: String,
    pub scheme: Arc<dyn DetectionScheme>,
    pub model: SensitivityModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub anchor_coupling: f64,
    pub anchor_compton_omega: f64,
    pub anchor_acceleration_asd: f64,
    pub quoted_acceleration_asd: Option<f64>,
    pub material_acceleration: f64,
}

/// Scenario turned into library objects, validated.
#[derive(Clone)]
pub struct Resolved {
    pub file: ScenarioFile,
    pub convention: DampingConvention,
    pub oscillator: OscillatorParams,
    pub cavity: CavityOpticsParams,
    pub base: SensitivityModel,
    pub curves: Vec<Curve>,
    pub calibration: Option<Calibration>,
    pub defaults: BTreeMap<String, serde_json::Value>,
    pub warnings: Vec<String>,
}

fn squeezing_from(db: Option<f64>, photons: Option<f64>) -> CliResult<SqueezingConfig> {
    Ok(match (db, photons) {
        (Some(_), Some(_)) => {
            return Err(CliError::Scenario("give squeezing_db or squeezing_photons, not both".into()))
        }
        (Some(db), None) => SqueezingConfig::from_db(db)?,
        (None, Some(n)) => SqueezingConfig::from_photons(n)?,
        (None, None) => SqueezingConfig::vacuum(),
    })
}

fn angle_from(name: &str, theta: Option<f64>) -> CliResult<Arc<dyn AnglePolicy>> {
    let mut params = StrategyParams::new();
    if let Some(t) = theta {
        params.insert("theta_rad".into(), t);
    }
    Ok(Arc::from(angle_policies().create(name, &params)?))
}

impl ScenarioFile {
    pub fn resolve(&self, convention_override: Option<DampingConvention>) -> CliResult<Resolved> {
        let mut warnings = Vec::new();
        let mut defaults = BTreeMap::new();

        let file_convention = self
            .oscillator
            .gamma_convention
            .as_deref()
            .map(str::parse::<DampingConvention>)
            .transpose()?;
        let convention = convention_override.or(file_convention).unwrap_or_default();
        if convention_override.is_none() && file_convention.is_none() {
            defaults.insert("gamma_convention".into(), json!(convention.name()));
        }

        let o = &self.oscillator;
        let resonance = hz_to_rad(o.resonance_hz);
        let oscillator = match (o.quality, o.damping_rad_s) {
            (Some(q), None) => OscillatorParams::from_quality(o.mass_kg, resonance, q, o.temperature_k, convention)?,
            (None, Some(g)) => {
                if convention_override.is_some() {
                    warnings.push("gamma convention has no effect: damping_rad_s is given explicitly".into());
                }
                OscillatorParams::new(o.mass_kg, resonance, g, o.temperature_k)?
            }
            _ => return Err(CliError::Scenario("oscillator needs exactly one of quality, damping_rad_s".into())),
        };

        let c = &self.cavity;
        let cavity = CavityOpticsParams::new(
            c.kappa_rad_s,
            c.kappa_readout_rad_s.unwrap_or(c.kappa_rad_s),
            c.g0_rad_s,
            CavityOpticsParams::laser_omega_from_wavelength(c.wavelength_m),
            self.array.power_w,
            c.efficiency_sq,
        )?;

        let a = &self.array;
        let convention_power = match a.power_convention.as_str() {
            "per-sensor" => PowerConvention::PerSensor,
            "total" => PowerConvention::Total,
            other => {
                return Err(CliError::Scenario(format!(
                    "power_convention must be `per-sensor` or `total`, got `{other}`"
                )))
            }
        };
        let mut combining_params = StrategyParams::new();
        if let Some(f) = a.combining_omega_hz {
            combining_params.insert("omega_rad_s".into(), hz_to_rad(f));
        }
        let combining = Arc::from(combining_policies().create(&a.combining, &combining_params)?);
        let template = ArrayTemplate {
            sensor: Sensor::new(oscillator, cavity),
            sensors: a.sensors,
            power: a.power_w,
            convention: convention_power,
            combining,
            dividing: a.dividing_weights.clone(),
        };

        let squeezing = squeezing_from(self.light.squeezing_db, self.light.squeezing_photons)?;
        let angle = angle_from(&self.light.angle, self.light.angle_rad)?;

        let g = &self.grid;
        if !(g.tolerance > 0.0) {
            return Err(CliError::Scenario(format!("grid tolerance must be > 0, got {}", g.tolerance)));
        }
        let quadrature = QuadratureOptions {
            rel_tol: g.tolerance,
            abs_tol: 0.0,
            max_intervals: g.max_intervals,
        };
        let span = g.span_hz.map(|[lo, hi]| (hz_to_rad(lo), hz_to_rad(hi)));
        if span.is_none() {
            defaults.insert("integration_span".into(), json!("[Ω_min/1e3, min(1e3·Ω_max, κ/10)]"));
        }

        let (dark_matter, calibration) = match &self.dark_matter {
            Some(dm) => {
                let (model, plan, cal) = self.resolve_dark_matter(dm, &oscillator, &mut defaults)?;
                warnings.extend(plan.check(&model)?);
                (Some((model, plan)), cal)
            }
            None => (None, None),
        };

        let base = SensitivityModel {
            template,
            squeezing,
            angle,
            schemes: vec![],
            span,
            points_per_decade: g.points_per_decade,
            quadrature,
            dark_matter,
        };
        // Builds once so an invalid network fails here, before any output.
        let diagnostics = base.template.build()?.diagnostics().clone();
        warnings.extend(diagnostics.warnings);
        base.grid(&base.template.build()?)?;

        let mut curves = Vec::new();
        for cb in &self.curves {
            curves.push(self.resolve_curve(cb, &base)?);
        }
        let mut labels: Vec<&str> = curves.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != curves.len() {
            return Err(CliError::Scenario("curve labels must be unique".into()));
        }

        Ok(Resolved {
            file: self.clone(),
            convention,
            oscillator,
            cavity,
            base,
            curves,
            calibration,
            defaults,
            warnings,
        })
    }

    fn resolve_curve(&self, cb: &CurveBlock, base: &SensitivityModel) -> CliResult<Curve> {
        let mut params = StrategyParams::new();
        if let Some(d) = cb.power_decades {
            params.insert("power_decades".into(), d);
        }
        let scheme: Arc<dyn DetectionScheme> = Arc::from(detection_schemes().create(&cb.scheme, &params)?);
        let mut model = base.clone();
        model.schemes = vec![scheme.clone()];
        if let Some(m) = cb.sensors {
            model.template.sensors = m;
        }
        if let Some(p) = cb.power_w {
            model.template.power = p;
        }
        if cb.squeezing_db.is_some() || cb.squeezing_photons.is_some() {
            model.squeezing = squeezing_from(cb.squeezing_db, cb.squeezing_photons)?;
        }
        if cb.angle.is_some() || cb.angle_rad.is_some() {
            let name = cb.angle.as_deref().unwrap_or(&self.light.angle);
            model.angle = angle_from(name, cb.angle_rad.or(self.light.angle_rad))?;
        }
        model.template.build()?;
        Ok(Curve {
            label: cb.label.clone(),
            scheme,
            model,
        })
    }

    fn resolve_dark_matter(
        &self,
        dm: &DarkMatterBlock,
        oscillator: &OscillatorParams,
        defaults: &mut BTreeMap<String, serde_json::Value>,
    ) -> CliResult<(DarkMatterModel, ObservationPlan, Option<Calibration>)> {
        let density = gev_per_cm3_to_kg_per_m3(dm.density_gev_cm3);
        let compton = hz_to_rad(dm.compton_hz);
        if dm.linewidth_fraction == DEFAULT_LINEWIDTH_FRACTION {
            defaults.insert("linewidth_rule".into(), json!("Δ_a = 1e-6·Ω_DM"));
        }
        if dm.density_gev_cm3 == DEFAULT_DENSITY_GEV_CM3 {
            defaults.insert("density_gev_cm3".into(), json!(DEFAULT_DENSITY_GEV_CM3));
        }
        let ob = &self.observation;
        if ob.threshold == DEFAULT_THRESHOLD {
            defaults.insert("snr_threshold".into(), json!(DEFAULT_THRESHOLD));
        }
        let mut plan = ObservationPlan::new(ob.total_time_s)?;
        plan.integration_time = ob.integration_time_s;
        plan.threshold = ob.threshold;
        if ob.integration_time_s.is_none() {
            defaults.insert("integration_time".into(), json!("1/Δ_a"));
        }

        let (material, calibration) = match (&dm.anchor, dm.material_acceleration_m_s2) {
            (Some(_), Some(_)) => {
                return Err(CliError::Scenario(
                    "dark_matter needs material_acceleration_m_s2 or an anchor, not both".into(),
                ))
            }
            (None, Some(m)) => (m, None),
            (None, None) => {
                return Err(CliError::Scenario(
                    "dark_matter needs material_acceleration_m_s2 or an anchor".into(),
                ))
            }
            (Some(anchor), None) => {
                let asd = match &anchor.acceleration_asd_m_s2_rthz {
                    AnchorNoise::Value(v) => *v,
                    AnchorNoise::Named(n) if n == "thermal-floor" => thermal_acceleration_asd(oscillator),
                    AnchorNoise::Named(n) => {
                        return Err(CliError::Scenario(format!(
                            "anchor acceleration must be a number or `thermal-floor`, got `{n}`"
                        )))
                    }
                };
                let anchor_omega = hz_to_rad(anchor.compton_hz.unwrap_or(dm.compton_hz));
                let material = calibrate_material_acceleration(&CouplingAnchor {
                    coupling: anchor.coupling,
                    acceleration_asd: asd,
                    compton_omega: anchor_omega,
                    total_time: ob.total_time_s,
                    threshold: ob.threshold,
                    density,
                    linewidth_fraction: dm.linewidth_fraction,
                })?;
                (
                    material,
                    Some(Calibration {
                        anchor_coupling: anchor.coupling,
                        anchor_compton_omega: anchor_omega,
                        anchor_acceleration_asd: asd,
                        quoted_acceleration_asd: anchor.quoted_acceleration_asd_m_s2_rthz,
                        material_acceleration: material,
                    }),
                )
            }
        };
        let mut model = DarkMatterModel::new(1.0, material, compton)?;
        model.density = density;
        model.linewidth = dm.linewidth_fraction * compton;
        Ok((model.validated()?, plan, calibration))
    }
}

/// √S_FF^th / m for one oscillator (m s⁻²/√Hz).
pub fn thermal_acceleration_asd(osc: &OscillatorParams) -> f64 {
    osc.thermal_force_psd(osc.thermal_occupation()).sqrt() / osc.mass()
}
