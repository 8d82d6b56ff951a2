//! Sequence discovery, annotation/detection sidecar files, site manifests
//! and dataset statistics.

mod boxes;
mod manifest;
mod stats;
mod template;

pub use boxes::{
    denormalize, format_annotation_line, format_detection_line, normalize, parse_annotations,
    parse_detections, read_annotations, read_detections, write_annotations, write_detections,
};
pub use manifest::{read_manifest_csv, write_manifest_csv};
pub use stats::{dataset_stats, iso_week, stats_to_csv, DatasetStats, SiteStats};
pub use template::{FilenameTemplate, Parsed, TimeSource};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::record::FrameRecord;

pub const DEFAULT_INTERVAL_SECS: i64 = 30;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed line: {reason}")]
    MalformedLine {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}:{line}: value {value} outside [0, 1] or degenerate box")]
    ValueOutOfRange { path: String, line: usize, value: f64 },
    #[error("{path}:{line}: confidence {value} outside [0, 1]")]
    ConfidenceOutOfRange { path: String, line: usize, value: f64 },
    #[error("no frames found under {root} ({skipped} files skipped)")]
    EmptySequence { root: String, skipped: usize },
    #[error("invalid filename template: {0}")]
    InvalidTemplate(String),
    #[error("manifest {path}: {reason}")]
    Manifest { path: String, reason: String },
}

impl IngestError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IngestError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CameraView {
    #[default]
    Top,
    Side,
}

impl fmt::Display for CameraView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CameraView::Top => "Top",
            CameraView::Side => "Side",
        })
    }
}

impl FromStr for CameraView {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "top" => Ok(CameraView::Top),
            "side" => Ok(CameraView::Side),
            other => Err(format!("unknown camera view {other:?}")),
        }
    }
}

/// One camera site's ordered frames.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceManifest {
    pub site_id: String,
    pub camera_view: CameraView,
    pub plant: String,
    pub nominal_interval_secs: i64,
    pub frames: Vec<FrameRecord>,
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub site_id: String,
    pub camera_view: CameraView,
    pub plant: String,
    pub nominal_interval_secs: i64,
    /// Time of counter 0 when names carry no timestamp.
    pub start: DateTime<Utc>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            site_id: "site".into(),
            camera_view: CameraView::Top,
            plant: String::new(),
            nominal_interval_secs: DEFAULT_INTERVAL_SECS,
            start: DateTime::UNIX_EPOCH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub manifest: SequenceManifest,
    pub skipped: Vec<SkippedFile>,
}

/// Lists `root` (non-recursively) and orders matching files by time.
pub fn scan_sequence(
    root: &Path,
    template: &FilenameTemplate,
    opts: &ScanOptions,
) -> Result<ScanOutcome, IngestError> {
    if opts.site_id.trim().is_empty() {
        return Err(IngestError::Manifest {
            path: root.display().to_string(),
            reason: "empty site id".into(),
        });
    }
    let entries = fs::read_dir(root).map_err(|e| IngestError::io(root, e))?;
    let mut names = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| IngestError::io(root, e))?;
        if entry.file_type().map(|t| t.is_file()).unwrap_or(false) {
            names.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    names.sort();

    let mut skipped = Vec::new();
    let mut timed: Vec<(DateTime<Utc>, String)> = Vec::new();
    let mut rank = 0u64;
    for name in names {
        let path = root.join(&name);
        let parsed = match template.match_name(&name) {
            None => {
                skipped.push(SkippedFile {
                    path,
                    reason: format!("does not match template {:?}", template.as_str()),
                });
                continue;
            }
            Some(Err(reason)) => {
                skipped.push(SkippedFile {
                    path,
                    reason: format!("unparsable timestamp: {reason}"),
                });
                continue;
            }
            Some(Ok(p)) => p,
        };
        let ts = match parsed {
            Parsed::Time(t) => t,
            Parsed::Counter(c) => opts.start + Duration::seconds(c as i64 * opts.nominal_interval_secs),
            Parsed::Unordered => {
                rank += 1;
                opts.start + Duration::seconds((rank - 1) as i64 * opts.nominal_interval_secs)
            }
        };
        timed.push((ts, name));
    }
    timed.sort();

    let mut frames: Vec<FrameRecord> = Vec::with_capacity(timed.len());
    for (ts, name) in timed {
        let path = root.join(&name);
        if frames.last().is_some_and(|f| f.timestamp == ts) {
            skipped.push(SkippedFile {
                path,
                reason: format!("duplicate timestamp {}", ts.to_rfc3339()),
            });
            continue;
        }
        frames.push(FrameRecord::new(opts.site_id.clone(), ts, frames.len(), path));
    }
    if frames.is_empty() {
        return Err(IngestError::EmptySequence {
            root: root.display().to_string(),
            skipped: skipped.len(),
        });
    }
    Ok(ScanOutcome {
        manifest: SequenceManifest {
            site_id: opts.site_id.clone(),
            camera_view: opts.camera_view,
            plant: opts.plant.clone(),
            nominal_interval_secs: opts.nominal_interval_secs,
            frames,
        },
        skipped,
    })
}

/// Frames whose spacing deviates from the nominal interval by more than `slack_secs`.
pub fn irregular_intervals(manifest: &SequenceManifest, slack_secs: i64) -> Vec<usize> {
    manifest
        .frames
        .windows(2)
        .filter(|w| {
            let gap = (w[1].timestamp - w[0].timestamp).num_seconds();
            (gap - manifest.nominal_interval_secs).abs() > slack_secs
        })
        .map(|w| w[1].sequence_index)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn touch(dir: &Path, names: &[&str]) {
        for n in names {
            fs::write(dir.join(n), b"x").unwrap();
        }
    }

    #[test]
    fn counter_sequence() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), &["t0002.jpg", "t0000.jpg", "t0001.jpg"]);
        let t = FilenameTemplate::parse("t{counter}.jpg").unwrap();
        let out = scan_sequence(dir.path(), &t, &ScanOptions::default()).unwrap();
        let secs: Vec<i64> = out.manifest.frames.iter().map(|f| f.timestamp.timestamp()).collect();
        assert_eq!(secs, vec![0, 30, 60]);
        let idx: Vec<usize> = out.manifest.frames.iter().map(|f| f.sequence_index).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        assert!(out.skipped.is_empty());
    }

    #[test]
    fn non_matching_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), &["t0000.jpg", "notes.txt"]);
        let t = FilenameTemplate::parse("t{counter}.{ext}").unwrap();
        let out = scan_sequence(dir.path(), &t, &ScanOptions::default()).unwrap();
        assert_eq!(out.manifest.frames.len(), 1);
        assert_eq!(out.skipped.len(), 1);
        assert!(out.skipped[0].path.ends_with("notes.txt"));
    }

    #[test]
    fn embedded_timestamps_sort_chronologically() {
        let dir = tempfile::tempdir().unwrap();
        // lexicographic order differs from time order because of the prefix
        touch(
            dir.path(),
            &["b_2022-06-14T04-31-00.png", "a_2022-06-14T04-31-30.png", "c_2022-06-14T04-30-30.png"],
        );
        let t = FilenameTemplate::parse("{*}_{iso}.png").unwrap();
        let out = scan_sequence(dir.path(), &t, &ScanOptions::default()).unwrap();
        let names: Vec<String> = out.manifest.frames.iter().map(|f| f.stem()).collect();
        assert_eq!(names, vec!["c_2022-06-14T04-30-30", "b_2022-06-14T04-31-00", "a_2022-06-14T04-31-30"]);
        assert_eq!(
            out.manifest.frames[0].timestamp,
            Utc.with_ymd_and_hms(2022, 6, 14, 4, 30, 30).unwrap()
        );
        assert!(irregular_intervals(&out.manifest, 2).is_empty());
    }

    #[test]
    fn bad_timestamps_and_duplicates_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), &["f_20221399_000000.png", "f_20220101_000000.png", "g_20220101_000000.png"]);
        let t = FilenameTemplate::parse("{*}_{Y}{m}{d}_{H}{M}{S}.png").unwrap();
        let out = scan_sequence(dir.path(), &t, &ScanOptions::default()).unwrap();
        assert_eq!(out.manifest.frames.len(), 1);
        assert_eq!(out.skipped.len(), 2);
    }

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), &["readme.md"]);
        let t = FilenameTemplate::parse("t{counter}.jpg").unwrap();
        assert!(matches!(
            scan_sequence(dir.path(), &t, &ScanOptions::default()),
            Err(IngestError::EmptySequence { skipped: 1, .. })
        ));
    }

    #[test]
    fn camera_view_parsing() {
        assert_eq!("side".parse::<CameraView>().unwrap(), CameraView::Side);
        assert_eq!(" Top ".parse::<CameraView>().unwrap(), CameraView::Top);
        assert!("front".parse::<CameraView>().is_err());
    }
}
