//! Command bodies. Each returns tables plus a manifest; nothing touches disk here.

use std::collections::BTreeMap;

use optoarray_core::array::{array_noise_psd, array_sql_psd, array_squeezed_noise, ArrayConfig, CoherentSums};
use optoarray_core::array::coherent_sums;
use optoarray_core::constants::{hz_to_rad, rad_to_hz};
use optoarray_core::oracle::{run_random_suite, SuiteOptions};
use optoarray_core::sensitivity::{
    integrated_sensitivity, resonance_refined_grid, scan_curves, sql_sensitivity_estimate, sql_sensitivity_exact,
    FrequencyGrid, GridSpec, Resonance, ScanAxis, ScanRecord, SchemeSetup, SensitivityModel,
};
use optoarray_core::spectra::{
    cavity_phase_and_cooperativity, force_noise_breakdown, mechanical_susceptibility, sql_noise_psd,
    DampingConvention, OscillatorParams, QuadraturePsdTriple,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::overlay::Overlay;
use crate::scenario::{parse_scenario, thermal_acceleration_asd, Resolved, ScenarioSource};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Noise,
    ArrayScan,
    Sensitivity,
    DmProjection,
    PowerScan,
    LossScan,
    OracleCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Noise => "noise",
            Command::ArrayScan => "array-scan",
            Command::Sensitivity => "sensitivity",
            Command::DmProjection => "dm-projection",
            Command::PowerScan => "power-scan",
            Command::LossScan => "loss-scan",
            Command::OracleCheck => "oracle-check",
        }
    }

    fn scan_axis(self) -> Option<&'static str> {
        match self {
            Command::ArrayScan => Some("sensors"),
            Command::PowerScan => Some("power_w"),
            Command::LossScan => Some("loss"),
            Command::DmProjection => Some("compton_hz"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub strict: bool,
    pub tolerance: Option<f64>,
    pub gamma_convention: Option<DampingConvention>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub manifest: Value,
    /// Failed points; also listed in the manifest.
    pub failures: Vec<String>,
    pub numerical_failure: bool,
}

struct Ctx {
    source: ScenarioSource,
    resolved: Resolved,
    warnings: Vec<String>,
    failures: Vec<String>,
    numerical_failure: bool,
    results: BTreeMap<String, Value>,
}

impl Ctx {
    fn record_failure(&mut self, what: String, err: &optoarray_core::Error) {
        self.numerical_failure |= err.is_numerical();
        self.failures.push(format!("{what}: {err}"));
    }
}

pub fn run(command: Command, source: &ScenarioSource, opts: &RunOptions) -> CliResult<RunOutput> {
    if command == Command::OracleCheck {
        return oracle_check(opts);
    }
    let (file, mut warnings) = parse_scenario(&source.text, opts.strict)?;
    let mut resolved = file.resolve(opts.gamma_convention)?;
    if let Some(t) = opts.tolerance {
        if !(t > 0.0) {
            return Err(CliError::Scenario(format!("tolerance must be > 0, got {t}")));
        }
        resolved.base.quadrature.rel_tol = t;
        for c in &mut resolved.curves {
            c.model.quadrature.rel_tol = t;
        }
    }
    warnings.append(&mut resolved.warnings);
    let mut ctx = Ctx {
        source: source.clone(),
        resolved,
        warnings,
        failures: vec![],
        numerical_failure: false,
        results: BTreeMap::new(),
    };
    let tables = match command {
        Command::Noise => vec![noise(&mut ctx)?],
        Command::Sensitivity => vec![sensitivity(&mut ctx)?],
        _ => vec![scan(&mut ctx, command)?],
    };
    let manifest = manifest(&ctx, command, &tables)?;
    Ok(RunOutput {
        tables,
        manifest,
        failures: ctx.failures,
        numerical_failure: ctx.numerical_failure,
    })
}

fn curves_or_default(ctx: &Ctx) -> CliResult<Vec<crate::scenario::Curve>> {
    if !ctx.resolved.curves.is_empty() {
        return Ok(ctx.resolved.curves.clone());
    }
    let scheme: std::sync::Arc<dyn optoarray_core::sensitivity::DetectionScheme> = std::sync::Arc::from(
        optoarray_core::sensitivity::detection_schemes().create("classical-coherent", &Default::default())?,
    );
    let mut model = ctx.resolved.base.clone();
    model.schemes = vec![scheme.clone()];
    Ok(vec![crate::scenario::Curve {
        label: "classical".into(),
        scheme,
        model,
    }])
}

fn with_mass_response(model: &SensitivityModel) -> CliResult<SchemeSetup> {
    let mut m = model.clone();
    m.dark_matter = None;
    let mut setup = m.setup()?;
    setup.array = setup.array.map_sensors(|s| Ok(s.with_response(s.oscillator.mass())))?;
    Ok(setup)
}

fn noise_frequencies(ctx: &Ctx) -> CliResult<Vec<f64>> {
    let f0 = ctx.resolved.file.oscillator.resonance_hz;
    let (start, stop, n) = match &ctx.resolved.file.noise {
        Some(b) => (b.start_hz, b.stop_hz, b.points),
        None => (f0 / 100.0, f0 * 100.0, 401),
    };
    if !(start > 0.0 && stop > start && n >= 2) {
        return Err(CliError::Scenario(format!(
            "noise needs 0 < start_hz < stop_hz and points ≥ 2, got {start}, {stop}, {n}"
        )));
    }
    let mut f = log_space(start, stop, n);
    let cfg = ctx.resolved.base.template.build()?;
    for s in cfg.sensors() {
        let fr = rad_to_hz(s.oscillator.resonance());
        if fr > start && fr < stop {
            f.push(fr);
        }
    }
    f.sort_by(f64::total_cmp);
    f.dedup();
    Ok(f)
}

pub fn log_space(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                stop
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn noise(ctx: &mut Ctx) -> CliResult<Table> {
    let cfg = ctx.resolved.base.template.build()?;
    let curves = curves_or_default(ctx)?;
    let setups: Vec<SchemeSetup> = curves.iter().map(|c| with_mass_response(&c.model)).collect::<CliResult<_>>()?;
    let squeezing = ctx.resolved.base.squeezing;
    let angle = ctx.resolved.base.angle.clone();

    let mut columns: Vec<String> = [
        "frequency_hz",
        "shot_n2_hz",
        "back_action_n2_hz",
        "correlation_n2_hz",
        "thermal_n2_hz",
        "residual_vacuum_n2_hz",
        "loss_n2_hz",
        "total_n2_hz",
        "squeezed_total_n2_hz",
        "squeezing_angle_rad",
        "sql_n2_hz",
    ]
    .map(String::from)
    .to_vec();
    columns.extend(curves.iter().map(|c| format!("{}_asd_m_s2_rthz", c.label)));
    let mut table = Table::new("noise", columns);

    for f in noise_frequencies(ctx)? {
        let omega = hz_to_rad(f);
        let b = array_noise_psd(&cfg, &QuadraturePsdTriple::VACUUM, omega)?;
        let sums: CoherentSums = coherent_sums(&cfg, omega)?;
        let theta = angle.angle(&sums, squeezing.strength());
        let sq = array_squeezed_noise(&cfg, squeezing.strength(), theta, omega)?;
        let mut row: Vec<Cell> = vec![
            f.into(),
            b.shot.into(),
            b.back_action.into(),
            b.correlation.into(),
            b.thermal.into(),
            b.residual_vacuum.into(),
            b.loss.into(),
            b.total.into(),
            sq.total.into(),
            theta.into(),
            array_sql_psd(&cfg, omega).into(),
        ];
        for (c, setup) in curves.iter().zip(&setups) {
            match c.scheme.snr_density(setup, omega) {
                Ok(d) => row.push((1.0 / d.sqrt()).into()),
                Err(e) => {
                    ctx.record_failure(format!("curve `{}` at {f} Hz", c.label), &e);
                    row.push(Cell::Missing);
                }
            }
        }
        table.push(row);
    }

    let floors = floors_report(ctx)?;
    ctx.results.insert("floors".into(), floors);
    Ok(table)
}

/// Single-sensor reference floors at the first sensor's resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Floors {
    pub thermal_acceleration_asd: f64,
    pub on_resonance_acceleration_asd: f64,
    pub shot_displacement_asd: f64,
}

pub fn single_sensor_floors(cfg: &ArrayConfig) -> CliResult<Floors> {
    let sensor = cfg.sensors()[0];
    let osc: OscillatorParams = sensor.oscillator;
    let cav = sensor.cavity.with_power(cfg.sensor_power(0))?;
    let omega = osc.resonance();
    let coop = cavity_phase_and_cooperativity(&cav, &osc, 1.0, omega)?.magnitude();
    let b = force_noise_breakdown(&osc, coop, cav.efficiency_sq(), &QuadraturePsdTriple::VACUUM, None, omega)?;
    let chi = mechanical_susceptibility(&osc, omega).value.norm();
    let m = osc.mass();
    Ok(Floors {
        thermal_acceleration_asd: thermal_acceleration_asd(&osc),
        on_resonance_acceleration_asd: b.total.sqrt() / m,
        shot_displacement_asd: b.shot.sqrt() * chi / (m * omega),
    })
}

fn floors_report(ctx: &Ctx) -> CliResult<Value> {
    let file = &ctx.resolved.file;
    let floors_for = |conv| -> CliResult<Floors> {
        single_sensor_floors(&file.resolve(Some(conv))?.base.template.build()?)
    };
    let per = [floors_for(DampingConvention::Half)?, floors_for(DampingConvention::Full)?];
    let fields: [(&str, fn(&Floors) -> f64, Option<f64>); 3] = [
        (
            "thermal_acceleration_asd_m_s2_rthz",
            |f| f.thermal_acceleration_asd,
            file.reference.as_ref().and_then(|r| r.thermal_acceleration_asd_m_s2_rthz),
        ),
        (
            "on_resonance_acceleration_asd_m_s2_rthz",
            |f| f.on_resonance_acceleration_asd,
            file.reference.as_ref().and_then(|r| r.back_action_acceleration_asd_m_s2_rthz),
        ),
        (
            "shot_displacement_asd_m_rthz",
            |f| f.shot_displacement_asd,
            file.reference.as_ref().and_then(|r| r.shot_displacement_asd_m_rthz),
        ),
    ];
    let factor = file.reference.as_ref().map_or(3.0, |r| r.factor);
    let mut out = serde_json::Map::new();
    for (name, get, quoted) in fields {
        let half = get(&per[0]);
        let full = get(&per[1]);
        let mut entry = json!({ "half": half, "full": full });
        if let Some(q) = quoted {
            let c = compare(q, half, full, factor);
            entry["reference"] = json!(q);
            entry["ratio_half"] = json!(c.ratio_half);
            entry["ratio_full"] = json!(c.ratio_full);
            entry["within_factor"] = json!(c.within);
            entry["closer"] = json!(c.closer);
        }
        out.insert(name.into(), entry);
    }
    Ok(Value::Object(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub ratio_half: f64,
    pub ratio_full: f64,
    /// Whether the closer convention lands within the factor.
    pub within: bool,
    pub closer: &'static str,
}

pub fn compare(reference: f64, half: f64, full: f64, factor: f64) -> Comparison {
    let (rh, rf) = (half / reference, full / reference);
    let (dh, df) = (rh.ln().abs(), rf.ln().abs());
    let closer = if (dh - df).abs() <= 1e-9 {
        "equal"
    } else if dh < df {
        "half"
    } else {
        "full"
    };
    Comparison {
        ratio_half: rh,
        ratio_full: rf,
        within: dh.min(df) <= factor.ln(),
        closer,
    }
}

fn grid_stats(grid: &FrequencyGrid) -> Value {
    let (lo, hi) = grid.span();
    json!({
        "points": grid.len(),
        "span_hz": [rad_to_hz(lo), rad_to_hz(hi)],
        "resonances": grid.resonances().iter().map(|r: &Resonance| json!({
            "frequency_hz": rad_to_hz(r.omega),
            "linewidth_rad_s": r.linewidth,
            "points_within_10_linewidths": grid.points_near(r),
            "finest_spacing_rad_s": grid.finest_spacing_near(r),
        })).collect::<Vec<_>>(),
    })
}

fn sensitivity(ctx: &mut Ctx) -> CliResult<Table> {
    let curves = curves_or_default(ctx)?;
    let columns = [
        "curve",
        "scheme",
        "integrated",
        "error_estimate",
        "intervals",
        "evaluations",
        "halved_tolerance",
        "tolerance_change",
        "doubled_grid",
        "grid_change",
    ]
    .map(String::from)
    .to_vec();
    let mut table = Table::new("sensitivity", columns);
    for c in &curves {
        let mut halved = c.model.clone();
        halved.quadrature.rel_tol /= 2.0;
        let mut doubled = c.model.clone();
        doubled.points_per_decade *= 2;
        let results = [&c.model, &halved, &doubled].map(|m| m.integrate(c.scheme.as_ref()));
        let mut row = vec![Cell::Text(c.label.clone()), Cell::Text(c.scheme.name().into())];
        match &results {
            [Ok(base), Ok(h), Ok(d)] => {
                row.extend([
                    base.value.into(),
                    base.error_estimate.into(),
                    Cell::Int(base.intervals as i64),
                    Cell::Int(base.evaluations as i64),
                    h.value.into(),
                    ((h.value - base.value) / base.value).abs().into(),
                    d.value.into(),
                    ((d.value - base.value) / base.value).abs().into(),
                ]);
            }
            _ => {
                for e in results.iter().filter_map(|r| r.as_ref().err()) {
                    ctx.record_failure(format!("curve `{}`", c.label), e);
                }
                row.extend(std::iter::repeat(Cell::Missing).take(8));
            }
        }
        table.push(row);
    }

    let setup = ctx.resolved.base.setup()?;
    let grid = ctx.resolved.base.grid(&setup.array)?;
    ctx.results.insert("grid".into(), grid_stats(&grid));
    ctx.results.insert("sql_integral".into(), sql_integral_report(ctx)?);
    Ok(table)
}

/// Numeric SQL integral for the first oscillator against both closed forms,
/// under each damping convention.
fn sql_integral_report(ctx: &Ctx) -> CliResult<Value> {
    let mut out = serde_json::Map::new();
    for conv in [DampingConvention::Half, DampingConvention::Full] {
        let r = ctx.resolved.file.resolve(Some(conv))?;
        let osc = r.oscillator;
        let grid = resonance_refined_grid(&GridSpec::new(
            vec![Resonance {
                omega: osc.resonance(),
                linewidth: osc.damping(),
            }],
            None,
        ))?;
        let numeric = integrated_sensitivity(
            |_| Ok(1.0),
            |w| Ok(sql_noise_psd(&osc, w)),
            &grid,
            &ctx.resolved.base.quadrature,
        )?;
        out.insert(
            conv.name().into(),
            json!({
                "numeric": numeric.value,
                "closed_form": sql_sensitivity_exact(&osc, 1.0),
                "ratio_to_quoted_constant": numeric.value / sql_sensitivity_estimate(&osc, 1.0),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn scan_values(ctx: &Ctx, axis: &str) -> CliResult<Vec<f64>> {
    let scan = ctx
        .resolved
        .file
        .scan
        .as_ref()
        .ok_or_else(|| CliError::Scenario("this command needs a [scan] block".into()))?;
    if scan.axis != axis {
        return Err(CliError::Scenario(format!(
            "scan axis is `{}`, this command sweeps `{axis}`",
            scan.axis
        )));
    }
    let mut v = scan.values.clone();
    if let Some(r) = &scan.log_range {
        if !(r.start > 0.0 && r.stop > r.start && r.count >= 2) {
            return Err(CliError::Scenario("log_range needs 0 < start < stop and count ≥ 2".into()));
        }
        v.extend(log_space(r.start, r.stop, r.count));
    }
    if let Some(r) = &scan.linear_range {
        if !(r.stop > r.start && r.count >= 2) {
            return Err(CliError::Scenario("linear_range needs start < stop and count ≥ 2".into()));
        }
        v.extend((0..r.count).map(|i| r.start + (r.stop - r.start) * i as f64 / (r.count - 1) as f64));
    }
    if axis == "sensors" {
        for x in &mut v {
            *x = x.round();
        }
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    if v.is_empty() {
        return Err(CliError::Scenario("scan has no values".into()));
    }
    Ok(v)
}

fn to_core_axis(axis: &str, value: f64) -> (ScanAxis, f64) {
    match axis {
        "sensors" => (ScanAxis::Sensors, value),
        "power_w" => (ScanAxis::Power, value),
        "loss" => (ScanAxis::Efficiency, 1.0 - value),
        _ => (ScanAxis::DmFrequency, hz_to_rad(value)),
    }
}

fn axis_cell(axis: &str, v: f64) -> Cell {
    if axis == "sensors" {
        Cell::Int(v as i64)
    } else {
        Cell::Num(v)
    }
}

fn scan(ctx: &mut Ctx, command: Command) -> CliResult<Table> {
    let axis = command.scan_axis().expect("scan command");
    let values = scan_values(ctx, axis)?;
    let curves = curves_or_default(ctx)?;
    let dm = command == Command::DmProjection;
    if dm && ctx.resolved.base.dark_matter.is_none() {
        return Err(CliError::Scenario("dm-projection needs a [dark_matter] block".into()));
    }
    let core_values: Vec<f64> = values.iter().map(|&v| to_core_axis(axis, v).1).collect();
    let core_axis = to_core_axis(axis, values[0]).0;

    let overlays: Vec<Overlay> = if dm {
        ctx.resolved
            .file
            .overlays
            .iter()
            .map(|o| Overlay::read(&o.name, &ctx.source.base_dir.join(&o.path)))
            .collect::<CliResult<_>>()?
    } else {
        if !ctx.resolved.file.overlays.is_empty() {
            ctx.warnings.push("overlays are only used by dm-projection".into());
        }
        vec![]
    };

    let mut columns = vec![axis.to_string()];
    if axis == "loss" {
        columns.push("efficiency_sq".into());
    }
    for c in &curves {
        if dm {
            columns.push(format!("{}_g_min", c.label));
        } else {
            columns.push(c.label.clone());
            columns.push(format!("{}_error", c.label));
        }
    }
    if !dm {
        columns.push("resonance_noise_n2_hz".into());
    }
    columns.extend(overlays.iter().map(|o| o.name.clone()));
    let mut table = Table::new(command.name(), columns);

    let records: Vec<Vec<ScanRecord>> =
        curves.iter().map(|c| scan_curves(&c.model, core_axis, &core_values)).collect();

    for (i, &v) in values.iter().enumerate() {
        let mut row = vec![axis_cell(axis, v)];
        if axis == "loss" {
            row.push((1.0 - v).into());
        }
        for (c, recs) in curves.iter().zip(&records) {
            let rec = &recs[i];
            let what = format!("curve `{}` at {axis} = {v}", c.label);
            if dm {
                match &rec.couplings[0].1 {
                    Ok(g) => row.push((*g).into()),
                    Err(e) => {
                        ctx.record_failure(what, e);
                        row.push(Cell::Missing);
                    }
                }
            } else {
                match &rec.integrated[0].1 {
                    Ok(q) => row.extend([q.value.into(), q.error_estimate.into()]),
                    Err(e) => {
                        ctx.record_failure(what, e);
                        row.extend([Cell::Missing, Cell::Missing]);
                    }
                }
            }
        }
        if !dm {
            match records[0][i].resonance.as_ref() {
                Some(Ok(b)) => row.push(b.total.into()),
                Some(Err(e)) => {
                    ctx.record_failure(format!("resonance breakdown at {axis} = {v}"), e);
                    row.push(Cell::Missing);
                }
                None => row.push(Cell::Missing),
            }
        }
        row.extend(overlays.iter().map(|o| Cell::from(o.at(v))));
        table.push(row);
    }

    if dm {
        let plan = ctx.resolved.base.dark_matter.as_ref().map(|(_, p)| p.clone()).expect("checked");
        let dm0 = ctx.resolved.base.dark_matter.as_ref().map(|(d, _)| d.clone()).expect("checked");
        for &v in &values {
            for w in plan.check(&dm0.at_frequency(hz_to_rad(v))?)? {
                if !ctx.warnings.contains(&w) {
                    ctx.warnings.push(w);
                }
            }
        }
    } else {
        let setup = ctx.resolved.base.setup()?;
        let grid = ctx.resolved.base.grid(&setup.array)?;
        ctx.results.insert("grid".into(), grid_stats(&grid));
    }
    if let Some(c) = &ctx.resolved.calibration {
        ctx.results.insert(
            "calibration".into(),
            json!({
                "anchor_coupling": c.anchor_coupling,
                "anchor_compton_hz": rad_to_hz(c.anchor_compton_omega),
                "anchor_acceleration_asd_m_s2_rthz": c.anchor_acceleration_asd,
                "quoted_acceleration_asd_m_s2_rthz": c.quoted_acceleration_asd,
                "material_acceleration_m_s2": c.material_acceleration,
            }),
        );
    }
    Ok(table)
}

fn oracle_check(opts: &RunOptions) -> CliResult<RunOutput> {
    let tol = opts.tolerance.unwrap_or(1e-9);
    let suite = SuiteOptions::default();
    let r = run_random_suite(&suite)?;
    let mut table = Table::new("oracle-check", vec!["metric".into(), "value".into()]);
    for (k, v) in [
        ("max_total_error", r.max_total_error),
        ("max_block_error", r.max_block_error),
        ("max_eigen_error", r.max_eigen_error),
        ("max_projector_error", r.max_projector_error),
        ("max_completion_error", r.max_completion_error),
        ("min_oracle_psd", r.min_oracle_psd),
    ] {
        table.push(vec![Cell::Text(k.into()), v.into()]);
    }
    table.push(vec![Cell::Text("configs".into()), Cell::Int(r.configs as i64)]);
    table.push(vec![Cell::Text("evaluations".into()), Cell::Int(r.evaluations as i64)]);
    let pass = r.max_total_error < tol;
    let mut failures = vec![];
    if !pass {
        failures.push(format!("max relative residual {} ≥ tolerance {tol}", r.max_total_error));
    }
    let manifest = json!({
        "tool": "optoarray",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "oracle-check",
        "suite": {
            "seed": suite.seed,
            "configs": suite.configs,
            "frequencies": suite.frequencies,
            "max_sensors": suite.max_sensors,
            "max_squeezing_db": suite.max_squeezing_db,
        },
        "tolerance": tol,
        "pass": pass,
        "worst": r.worst.map(|(i, w)| json!({"config": i, "omega_rad_s": w})),
        "outputs": [table.name.clone()],
        "failures": failures,
        "warnings": Vec::<String>::new(),
    });
    Ok(RunOutput {
        tables: vec![table],
        manifest,
        numerical_failure: !pass,
        failures,
    })
}

fn manifest(ctx: &Ctx, command: Command, tables: &[Table]) -> CliResult<Value> {
    let q = &ctx.resolved.base.quadrature;
    let mut defaults = ctx.resolved.defaults.clone();
    if ctx.resolved.file.curves.is_empty() {
        defaults.insert("curves".into(), json!("classical-coherent"));
    }
    Ok(json!({
        "tool": "optoarray",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command.name(),
        "scenario": {
            "name": ctx.resolved.file.name,
            "source": ctx.source.label,
            "sha256": ctx.source.sha256(),
        },
        "gamma_convention": ctx.resolved.convention.name(),
        "defaults_used": defaults,
        "quadrature": {
            "rel_tol": q.rel_tol,
            "abs_tol": q.abs_tol,
            "max_intervals": q.max_intervals,
            "points_per_decade": ctx.resolved.base.points_per_decade,
        },
        "dark_matter": ctx.resolved.base.dark_matter.as_ref().map(|(dm, plan)| json!({
            "density_kg_m3": dm.density,
            "linewidth_fraction": dm.linewidth / dm.compton_omega,
            "material_acceleration_m_s2": dm.material_acceleration,
            "total_time_s": plan.total_time,
            "threshold": plan.threshold,
        })),
        "results": ctx.results,
        "outputs": tables.iter().map(|t| t.name.clone()).collect::<Vec<_>>(),
        "failures": ctx.failures,
        "warnings": ctx.warnings,
    }))
}
