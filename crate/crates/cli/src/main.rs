use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use optoarray_cli::presets::{default_for, preset};
use optoarray_cli::scenario::ScenarioSource;
use optoarray_cli::{render, run, write_outputs, CliError, CliResult, Command, Format, RunOptions};
use optoarray_core::spectra::DampingConvention;

/// Quantum noise budgets, integrated sensitivity and dark-matter projections
/// for optomechanical sensor arrays.
///
/// Every flag can also be set through an OPTOARRAY_* environment variable.
#[derive(Debug, Parser)]
#[command(name = "optoarray", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Scenario file (TOML). Defaults to the matching built-in preset.
    #[arg(long, global = true, env = "OPTOARRAY_SCENARIO")]
    scenario: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, env = "OPTOARRAY_OUT", default_value = "out")]
    out: PathBuf,

    /// Table format; the manifest is always JSON.
    #[arg(long, global = true, env = "OPTOARRAY_FORMAT", default_value = "csv")]
    format: Format,

    /// Relative quadrature tolerance (oracle-check: pass threshold).
    #[arg(long, global = true, env = "OPTOARRAY_TOLERANCE")]
    tolerance: Option<f64>,

    /// Reject unknown scenario keys instead of warning.
    #[arg(long, global = true, env = "OPTOARRAY_STRICT")]
    strict: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "OPTOARRAY_THREADS")]
    threads: Option<usize>,

    /// How a quality factor maps to γ: half (Q = Ω/2γ) or full (Q = Ω/γ).
    #[arg(long, global = true, env = "OPTOARRAY_GAMMA_CONVENTION")]
    gamma_convention: Option<DampingConvention>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Noise PSD breakdown against frequency.
    Noise,
    /// Integrated sensitivity against the number of sensors.
    ArrayScan,
    /// Integrated sensitivity with a convergence report.
    Sensitivity,
    /// Minimum detectable coupling against Compton frequency.
    DmProjection,
    /// Integrated sensitivity against laser power.
    PowerScan,
    /// Integrated sensitivity against detection loss.
    LossScan,
    /// Closed-form array noise against the covariance oracle on random arrays.
    OracleCheck,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

fn execute(cli: &Cli) -> CliResult<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Scenario(e.to_string()))?;
    }
    let (command, fallback) = match cli.command {
        Cmd::Noise => (Command::Noise, None),
        Cmd::ArrayScan => (Command::ArrayScan, None),
        Cmd::Sensitivity => (Command::Sensitivity, None),
        Cmd::DmProjection => (Command::DmProjection, None),
        Cmd::PowerScan => (Command::PowerScan, None),
        Cmd::LossScan => (Command::LossScan, None),
        Cmd::OracleCheck => (Command::OracleCheck, None),
        Cmd::Fig2 => figure("fig2"),
        Cmd::Fig3 => figure("fig3"),
        Cmd::Fig4 => figure("fig4"),
        Cmd::Fig5 => figure("fig5"),
        Cmd::Fig6 => figure("fig6"),
    };
    let source = match (&cli.scenario, fallback) {
        (Some(path), _) => ScenarioSource::from_path(path)?,
        (None, Some(s)) => s,
        (None, None) => default_for(command).unwrap_or_else(|| ScenarioSource {
            label: "none".into(),
            text: String::new(),
            base_dir: PathBuf::from("."),
        }),
    };
    let opts = RunOptions {
        strict: cli.strict,
        tolerance: cli.tolerance,
        gamma_convention: cli.gamma_convention,
    };
    let output = run(command, &source, &opts)?;
    let files = render(&output, cli.format)?;
    write_outputs(&cli.out, &files)?;
    for f in &output.failures {
        eprintln!("warning: {f}");
    }
    for (name, _) in &files {
        println!("{}", cli.out.join(name).display());
    }
    Ok(!output.numerical_failure)
}

fn figure(name: &str) -> (Command, Option<ScenarioSource>) {
    let (s, c) = preset(name).expect("built-in preset");
    (c, Some(s))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
