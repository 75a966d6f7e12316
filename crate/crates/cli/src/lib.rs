//! Scenario-driven front end: parses TOML scenarios, runs the library, and
//! writes CSV/JSON tables with a JSON run manifest.

pub mod commands;
pub mod error;
pub mod overlay;
pub mod presets;
pub mod scenario;
pub mod table;

use std::path::Path;

pub use commands::{run, Command, RunOptions, RunOutput};
pub use error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv or json)")),
        }
    }
}

/// Rendered file contents, in write order. The manifest comes last.
pub fn render(output: &RunOutput, format: Format) -> CliResult<Vec<(String, String)>> {
    let mut files = Vec::new();
    for t in &output.tables {
        let (name, body) = match format {
            Format::Csv => (
                format!("{}.csv", t.name),
                t.to_csv().map_err(|e| CliError::Scenario(e.to_string()))?,
            ),
            Format::Json => (format!("{}.json", t.name), pretty(&t.to_json())),
        };
        files.push((name, body));
    }
    files.push(("manifest.json".into(), pretty(&output.manifest)));
    Ok(files)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
