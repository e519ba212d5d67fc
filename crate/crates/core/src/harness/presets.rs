use super::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Built-in configurations, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("desk", include_str!("presets/desk.toml")),
    ("desk-random", include_str!("presets/desk-random.toml")),
    ("desk-classical", include_str!("presets/desk-classical.toml")),
    ("sweep", include_str!("presets/sweep.toml")),
    ("smoke", include_str!("presets/smoke.toml")),
];

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
            Error::config("preset", format!("unknown preset `{name}`, expected one of {}", names.join(", ")))
        })?;
    ExperimentConfig::parse(text)
}
