//! Repeated-position suppression over a time window and binned abundance
//! counts.
//!
//! A detection is suppressed when an earlier anchor of the same site lies
//! within `window_secs` before it and its box center within
//! `same_position_radius` pixels. By default only kept detections act as
//! anchors, so an insect that stays put is counted again once per window.

mod chart;

pub use chart::series_to_svg;

use std::collections::VecDeque;
use std::io::Write;

use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::Detection;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbundanceError {
    #[error("detection {index} is earlier than its predecessor")]
    UnsortedInput { index: usize },
    #[error("invalid abundance configuration: {0}")]
    InvalidConfig(String),
}

/// Which earlier detections can suppress a later one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    /// Only detections that were themselves kept.
    #[default]
    Kept,
    /// Every earlier detection, kept or suppressed.
    Any,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AbundanceConfig {
    pub window_secs: i64,
    pub same_position_radius: f64,
    pub bin_secs: i64,
    pub anchor: Anchor,
    /// Bins with `raw / filtered` above this are flagged.
    pub high_suppression_ratio: f64,
}

impl Default for AbundanceConfig {
    fn default() -> Self {
        Self {
            window_secs: 120,
            same_position_radius: 30.0,
            bin_secs: 86_400,
            anchor: Anchor::Kept,
            high_suppression_ratio: 3.0,
        }
    }
}

impl AbundanceConfig {
    pub fn validate(&self) -> Result<(), AbundanceError> {
        if self.window_secs < 0 {
            return Err(AbundanceError::InvalidConfig(format!("window {} < 0", self.window_secs)));
        }
        if !(self.same_position_radius >= 0.0) {
            return Err(AbundanceError::InvalidConfig(format!(
                "radius {} < 0",
                self.same_position_radius
            )));
        }
        if self.bin_secs <= 0 {
            return Err(AbundanceError::InvalidConfig(format!("bin {} <= 0", self.bin_secs)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome<T> {
    /// In processing order.
    pub kept: Vec<Detection<T>>,
    pub suppressed: Vec<Detection<T>>,
}

/// Scans time-ordered detections; equal timestamps are processed by
/// descending confidence.
pub fn temporal_filter<T: Real>(
    dets: &[Detection<T>],
    cfg: &AbundanceConfig,
) -> Result<FilterOutcome<T>, AbundanceError> {
    cfg.validate()?;
    for (i, w) in dets.windows(2).enumerate() {
        if w[1].frame.timestamp < w[0].frame.timestamp {
            return Err(AbundanceError::UnsortedInput { index: i + 1 });
        }
    }
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[a].frame.timestamp.cmp(&dets[b].frame.timestamp).then(
            dets[b]
                .confidence()
                .partial_cmp(&dets[a].confidence())
                .unwrap_or(std::cmp::Ordering::Equal),
        )
    });

    let window = Duration::seconds(cfg.window_secs);
    let r2 = T::of(cfg.same_position_radius * cfg.same_position_radius);
    let mut anchors: VecDeque<&Detection<T>> = VecDeque::new();
    let mut out = FilterOutcome {
        kept: Vec::new(),
        suppressed: Vec::new(),
    };
    for i in order {
        let d = &dets[i];
        let now = d.frame.timestamp;
        while anchors.front().is_some_and(|a| now - a.frame.timestamp >= window) {
            anchors.pop_front();
        }
        let hit = anchors
            .iter()
            .any(|a| a.frame.site_id == d.frame.site_id && a.bbox.center_distance_sq(&d.bbox) <= r2);
        if hit {
            out.suppressed.push(d.clone());
            if cfg.anchor == Anchor::Any {
                anchors.push_back(d);
            }
        } else {
            out.kept.push(d.clone());
            anchors.push_back(d);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin {
    pub start: DateTime<Utc>,
    pub raw: usize,
    pub filtered: usize,
    /// No frame was recorded in this bin.
    pub no_data: bool,
    /// `raw / filtered` exceeds the configured ratio.
    pub high_suppression: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbundanceSeries {
    pub bin_secs: i64,
    pub bins: Vec<Bin>,
}

fn bin_index(t: DateTime<Utc>, bin_secs: i64) -> i64 {
    t.timestamp().div_euclid(bin_secs)
}

/// Counts per bin from the first to the last bin touched by a detection or
/// a recorded frame. Bins are aligned to multiples of `bin_secs` since the
/// Unix epoch (UTC midnight for daily bins). Without `frame_times` no bin
/// is marked as lacking data.
pub fn abundance_series<T: Real>(
    kept: &[Detection<T>],
    raw: &[Detection<T>],
    frame_times: Option<&[DateTime<Utc>]>,
    cfg: &AbundanceConfig,
) -> Result<AbundanceSeries, AbundanceError> {
    cfg.validate()?;
    let b = cfg.bin_secs;
    let idx = raw
        .iter()
        .chain(kept)
        .map(|d| bin_index(d.frame.timestamp, b))
        .chain(frame_times.unwrap_or(&[]).iter().map(|&t| bin_index(t, b)));
    let (lo, hi) = match idx.fold(None, |acc: Option<(i64, i64)>, i| {
        Some(acc.map_or((i, i), |(l, h)| (l.min(i), h.max(i))))
    }) {
        Some(r) => r,
        None => {
            return Ok(AbundanceSeries {
                bin_secs: b,
                bins: Vec::new(),
            })
        }
    };
    let n = (hi - lo + 1) as usize;
    let mut raw_c = vec![0usize; n];
    let mut kept_c = vec![0usize; n];
    let mut recorded = vec![frame_times.is_none(); n];
    for d in raw {
        raw_c[(bin_index(d.frame.timestamp, b) - lo) as usize] += 1;
    }
    for d in kept {
        kept_c[(bin_index(d.frame.timestamp, b) - lo) as usize] += 1;
    }
    for &t in frame_times.unwrap_or(&[]) {
        recorded[(bin_index(t, b) - lo) as usize] = true;
    }
    let bins = (0..n)
        .map(|i| {
            let (r, f) = (raw_c[i], kept_c[i]);
            Bin {
                start: DateTime::from_timestamp((lo + i as i64) * b, 0).expect("bin start in range"),
                raw: r,
                filtered: f,
                no_data: !recorded[i],
                high_suppression: if f == 0 {
                    r > 0
                } else {
                    r as f64 / f as f64 > cfg.high_suppression_ratio
                },
            }
        })
        .collect();
    Ok(AbundanceSeries { bin_secs: b, bins })
}

/// `bin_start,raw,filtered,no_data` with RFC 3339 bin starts.
pub fn series_to_csv(series: &AbundanceSeries, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_start", "raw", "filtered", "no_data"])?;
    for bin in &series.bins {
        w.write_record([
            bin.start.to_rfc3339(),
            bin.raw.to_string(),
            bin.filtered.to_string(),
            bin.no_data.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
