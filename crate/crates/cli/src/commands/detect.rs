use std::sync::Arc;

use anyhow::Context;
use mie_core::detector::{self, DetectorConfig, Threshold};
use mie_core::imageio;
use mie_core::ingest;
use rayon::prelude::*;

use super::{config_error, pool};
use crate::cli::DetectArgs;
use crate::config::FileConfig;
use crate::input;

fn detector_config(args: &DetectArgs, file: &FileConfig) -> anyhow::Result<DetectorConfig> {
    let mut cfg = file.detector.clone();
    if let Some(t) = &args.threshold {
        cfg.threshold = if t.eq_ignore_ascii_case("otsu") {
            Threshold::Otsu
        } else {
            Threshold::Fixed(t.parse().map_err(|_| config_error(format!("--threshold {t:?} is neither 1-254 nor otsu")))?)
        };
    }
    cfg.open_radius = args.open_radius.unwrap_or(cfg.open_radius);
    cfg.min_area = args.min_area.unwrap_or(cfg.min_area);
    cfg.max_area = args.max_area.unwrap_or(cfg.max_area);
    cfg.pad = args.pad.unwrap_or(cfg.pad);
    cfg.validate().map_err(config_error)?;
    Ok(cfg)
}

pub fn run(args: &DetectArgs, file: &FileConfig, workers: usize) -> anyhow::Result<()> {
    let cfg = detector_config(args, file)?;
    let frames = input::load(&args.frames)?;
    input::create_dir(&args.out)?;
    let multi = frames.manifests.len() > 1;
    let pool = pool(workers)?;
    let (mut total, mut failures) = (0usize, Vec::new());
    let mut processed = 0usize;
    for m in &frames.manifests {
        let dir = input::site_dir(&args.out, &m.site_id, multi);
        input::create_dir(&dir)?;
        let results: Vec<anyhow::Result<usize>> = pool.install(|| {
            m.frames
                .par_iter()
                .map(|rec| {
                    let frame = imageio::load_color_frame(&rec.path)?;
                    let r = Arc::new(rec.clone());
                    let dets: Vec<mie_core::Detection> = detector::detect_plane(frame.red(), &r, &cfg)?;
                    let path = dir.join(format!("{}.txt", rec.stem()));
                    ingest::write_detections(&path, &dets, frame.width(), frame.height())?;
                    Ok(dets.len())
                })
                .collect()
        });
        for (rec, r) in m.frames.iter().zip(results) {
            match r {
                Ok(n) => {
                    total += n;
                    processed += 1;
                }
                Err(e) => {
                    log::warn!("{}: {e:#}", rec.path.display());
                    failures.push(serde_json::json!({ "path": rec.path, "error": format!("{e:#}") }));
                }
            }
        }
    }
    if processed == 0 {
        return Err(anyhow::anyhow!("no frame could be processed ({} failures)", failures.len()))
            .context("detect");
    }
    println!(
        "{}",
        serde_json::json!({ "status": "ok", "frames": processed, "detections": total, "failures": failures })
    );
    Ok(())
}
