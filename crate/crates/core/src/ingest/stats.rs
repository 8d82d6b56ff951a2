use std::io::Write;

use chrono::{DateTime, Datelike, Utc};
use serde::Serialize;

use super::{CameraView, SequenceManifest};
use crate::record::FrameRecord;

/// Counts for one camera site (one camera in one recording week).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteStats {
    pub site: String,
    /// ISO week of the first frame.
    pub week: Option<u32>,
    pub insects: usize,
    pub images: usize,
    /// `100 · insects / images`, 0 for an empty site.
    pub ratio: f64,
    pub view: CameraView,
    pub plant: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub sites: Vec<SiteStats>,
    pub total_insects: usize,
    pub total_images: usize,
    /// Pooled ratio over all images, not the mean of site ratios.
    pub total_ratio: f64,
}

fn ratio(insects: usize, images: usize) -> f64 {
    if images == 0 {
        0.0
    } else {
        100.0 * insects as f64 / images as f64
    }
}

pub fn iso_week(t: DateTime<Utc>) -> u32 {
    t.iso_week().week()
}

/// Per-site and pooled counts; `insects_in` gives the number of annotated
/// objects of a frame.
pub fn dataset_stats(
    manifests: &[SequenceManifest],
    insects_in: impl Fn(&FrameRecord) -> usize,
) -> DatasetStats {
    let sites: Vec<SiteStats> = manifests
        .iter()
        .map(|m| {
            let insects = m.frames.iter().map(&insects_in).sum();
            let images = m.frames.len();
            SiteStats {
                site: m.site_id.clone(),
                week: m.frames.first().map(|f| iso_week(f.timestamp)),
                insects,
                images,
                ratio: ratio(insects, images),
                view: m.camera_view,
                plant: m.plant.clone(),
            }
        })
        .collect();
    let total_insects = sites.iter().map(|s| s.insects).sum();
    let total_images = sites.iter().map(|s| s.images).sum();
    DatasetStats {
        sites,
        total_insects,
        total_images,
        total_ratio: ratio(total_insects, total_images),
    }
}

/// CSV with columns `site,week,insects,images,ratio,view,plant` and a
/// closing `total` row. Ratios are printed with one decimal.
pub fn stats_to_csv(stats: &DatasetStats, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["site", "week", "insects", "images", "ratio", "view", "plant"])?;
    for s in &stats.sites {
        w.write_record([
            s.site.clone(),
            s.week.map(|v| v.to_string()).unwrap_or_default(),
            s.insects.to_string(),
            s.images.to_string(),
            format!("{:.1}", s.ratio),
            s.view.to_string(),
            s.plant.clone(),
        ])?;
    }
    w.write_record([
        "total".to_string(),
        String::new(),
        stats.total_insects.to_string(),
        stats.total_images.to_string(),
        format!("{:.1}", stats.total_ratio),
        String::new(),
        String::new(),
    ])?;
    w.flush()?;
    Ok(())
}
