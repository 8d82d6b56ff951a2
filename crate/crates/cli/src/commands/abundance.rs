use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::Context;
use mie_core::abundance::{self, AbundanceConfig, Anchor};
use mie_core::ingest;
use mie_core::Detection;

use super::{config_error, with_output};
use crate::cli::{AbundanceArgs, AnchorArg};
use crate::config::FileConfig;
use crate::input;

fn abundance_config(args: &AbundanceArgs, file: &FileConfig) -> anyhow::Result<AbundanceConfig> {
    let mut cfg = file.abundance.clone();
    cfg.window_secs = args.window.unwrap_or(cfg.window_secs);
    cfg.same_position_radius = args.radius.unwrap_or(cfg.same_position_radius);
    cfg.bin_secs = args.bin.unwrap_or(cfg.bin_secs);
    if let Some(a) = args.anchor {
        cfg.anchor = match a {
            AnchorArg::Kept => Anchor::Kept,
            AnchorArg::Any => Anchor::Any,
        };
    }
    cfg.validate().map_err(config_error)?;
    Ok(cfg)
}

pub fn run(args: &AbundanceArgs, file: &FileConfig) -> anyhow::Result<()> {
    let cfg = abundance_config(args, file)?;
    input::require_dir(&args.det, "detection")?;
    let frames = input::load(&args.frames)?;
    let (w, h) = input::frame_dims(&frames);

    let mut raw: Vec<Detection> = Vec::new();
    let mut times = Vec::new();
    for m in &frames.manifests {
        for rec in &m.frames {
            times.push(rec.timestamp);
            let path = input::sidecar(&args.det, &m.site_id, &rec.stem());
            if path.is_file() {
                raw.extend(ingest::read_detections(&path, &Arc::new(rec.clone()), w, h)?);
            }
        }
    }
    raw.sort_by_key(|d| d.frame.timestamp);
    let out = abundance::temporal_filter(&raw, &cfg)?;
    let series = abundance::abundance_series(&out.kept, &raw, Some(&times), &cfg)?;
    log::info!("{} detections, {} kept", raw.len(), out.kept.len());

    with_output(args.out.as_deref(), |wr| Ok(abundance::series_to_csv(&series, wr)?))?;
    if let Some(svg) = &args.svg {
        std::fs::write(svg, abundance::series_to_svg(&series)).with_context(|| format!("writing {}", svg.display()))?;
    }
    if let Some(dir) = &args.kept {
        write_kept(dir, &out.kept, frames.manifests.len() > 1, w, h)?;
    }
    if args.out.is_some() {
        println!(
            "{}",
            serde_json::json!({ "status": "ok", "raw": raw.len(), "kept": out.kept.len(), "bins": series.bins.len() })
        );
    }
    Ok(())
}

fn write_kept(dir: &std::path::Path, kept: &[Detection], multi: bool, w: usize, h: usize) -> anyhow::Result<()> {
    let mut by_frame: BTreeMap<(String, String), Vec<Detection>> = BTreeMap::new();
    for d in kept {
        by_frame.entry((d.frame.site_id.clone(), d.frame.stem())).or_default().push(d.clone());
    }
    for ((site, stem), dets) in by_frame {
        let sub = input::site_dir(dir, &site, multi);
        input::create_dir(&sub)?;
        ingest::write_detections(&sub.join(format!("{stem}.txt")), &dets, w, h)?;
    }
    Ok(())
}
