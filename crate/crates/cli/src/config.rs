use std::fs;
use std::path::Path;

use anyhow::Context;
use mie_core::abundance::AbundanceConfig;
use mie_core::detector::DetectorConfig;
use mie_core::synth::{Background, SynthConfig};
use mie_core::MieConfig;
use serde::Deserialize;

use crate::UsageError;

/// The easy fixture rendered by `mie synth` without a config.
pub const DEFAULT_SYNTH: &str = include_str!("../fixtures/blob.toml");

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub workers: Option<usize>,
    pub mie: MieConfig,
    pub detector: DetectorConfig,
    pub abundance: AbundanceConfig,
    pub synth: Option<SynthConfig>,
}

const SECTIONS: [&str; 5] = ["workers", "mie", "detector", "abundance", "synth"];

/// A file whose top level has none of the section names is read as a bare
/// synth config.
pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
    let bare_synth = !table.is_empty() && !table.keys().any(|k| SECTIONS.contains(&k.as_str()));
    let mut cfg = if bare_synth {
        let synth: SynthConfig =
            toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
        FileConfig {
            synth: Some(synth),
            ..Default::default()
        }
    } else {
        toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())))?
    };
    if let Some(Background::Textured { path: tex }) = cfg.synth.as_mut().map(|s| &mut s.background) {
        if tex.is_relative() {
            *tex = path.parent().unwrap_or(Path::new("")).join(&*tex);
        }
    }
    Ok(cfg)
}

pub fn default_synth() -> anyhow::Result<SynthConfig> {
    toml::from_str(DEFAULT_SYNTH).context("built-in synth config")
}
