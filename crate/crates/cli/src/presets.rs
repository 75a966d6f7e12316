//! Scenario files shipped inside the binary, one per figure.

use std::path::PathBuf;

use crate::commands::Command;
use crate::scenario::ScenarioSource;

pub const PRESETS: [(&str, &str, Command); 5] = [
    ("fig2", include_str!("../scenarios/fig2.toml"), Command::ArrayScan),
    ("fig3", include_str!("../scenarios/fig3.toml"), Command::DmProjection),
    ("fig4", include_str!("../scenarios/fig4.toml"), Command::Noise),
    ("fig5", include_str!("../scenarios/fig5.toml"), Command::PowerScan),
    ("fig6", include_str!("../scenarios/fig6.toml"), Command::LossScan),
];

pub fn preset(name: &str) -> Option<(ScenarioSource, Command)> {
    PRESETS.iter().find(|(n, _, _)| *n == name).map(|(n, text, cmd)| {
        (
            ScenarioSource {
                label: format!("preset:{n}"),
                text: text.to_string(),
                base_dir: PathBuf::from("."),
            },
            *cmd,
        )
    })
}

/// Preset used when a command runs without `--scenario`.
pub fn default_for(command: Command) -> Option<ScenarioSource> {
    let name = match command {
        Command::Noise | Command::Sensitivity => "fig4",
        Command::ArrayScan => "fig2",
        Command::DmProjection => "fig3",
        Command::PowerScan => "fig5",
        Command::LossScan => "fig6",
        Command::OracleCheck => return None,
    };
    preset(name).map(|(s, _)| s)
}
