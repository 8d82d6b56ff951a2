use anyhow::Context;
use mie_core::synth;

use crate::cli::SynthArgs;
use crate::config::{self, FileConfig};
use crate::input;
use crate::UsageError;

pub fn run(args: &SynthArgs, file: &FileConfig) -> anyhow::Result<()> {
    let mut cfg = match &file.synth {
        Some(c) => c.clone(),
        None => config::default_synth()?,
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    let out = synth::generate(&cfg)?;
    input::create_dir(&args.out)?;
    synth::write_dataset(&args.out, &cfg, &out)?;
    let used = toml::to_string(&cfg).context("serializing synth config")?;
    std::fs::write(args.out.join("synth.toml"), used).context("writing synth.toml")?;
    println!(
        "{}",
        serde_json::json!({
            "status": "ok",
            "frames": out.frames.len(),
            "objects": out.truth.iter().map(Vec::len).sum::<usize>(),
            "out": args.out,
        })
    );
    Ok(())
}
