use std::collections::HashMap;

use mie_core::ingest::{self, SequenceManifest};
use mie_core::FrameRecord;

use super::with_output;
use crate::cli::StatsArgs;
use crate::input;

pub fn run(args: &StatsArgs) -> anyhow::Result<()> {
    input::require_dir(&args.ann, "annotation")?;
    let frames = input::load(&args.frames)?;
    let (w, h) = input::frame_dims(&frames);
    // annotation errors surface before any output is written
    let mut counts = HashMap::new();
    for m in &frames.manifests {
        for rec in &m.frames {
            counts.insert((rec.site_id.as_str(), rec.sequence_index), count(&args.ann, m, rec, w, h)?);
        }
    }
    let stats = ingest::dataset_stats(&frames.manifests, |r| {
        counts.get(&(r.site_id.as_str(), r.sequence_index)).copied().unwrap_or(0)
    });
    with_output(args.out.as_deref(), |wr| Ok(ingest::stats_to_csv(&stats, wr)?))
}

fn count(dir: &std::path::Path, m: &SequenceManifest, rec: &FrameRecord, w: usize, h: usize) -> anyhow::Result<usize> {
    let path = input::sidecar(dir, &m.site_id, &rec.stem());
    if !path.is_file() {
        return Ok(0);
    }
    let r = std::sync::Arc::new(rec.clone());
    Ok(ingest::read_annotations::<f64>(&path, &r, w, h)?.len())
}
