//! Sequence runner: windows of three frames, split at recording gaps,
//! processed in chunks on a bounded worker pool.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::{compose, grayscale_blur, motion_likelihood, EdgePolicy, EnhancedFrame, MieConfig, MieError};
use crate::frame::{ColorFrame, GrayFrame};
use crate::imageio::{self, OutputFormat};
use crate::record::FrameRecord;

/// Frames decoded per task; neighbors at chunk borders are decoded twice.
const CHUNK: usize = 8;

pub trait FrameSource: Sync {
    fn load(&self, record: &FrameRecord) -> Result<ColorFrame, MieError>;
}

pub trait FrameSink: Sync {
    /// Called once per emitted frame, in any order.
    fn write(&self, record: &FrameRecord, frame: &EnhancedFrame) -> Result<(), MieError>;
}

/// Decodes `record.path` from disk.
#[derive(Debug, Default, Clone, Copy)]
pub struct FileSource;

impl FrameSource for FileSource {
    fn load(&self, record: &FrameRecord) -> Result<ColorFrame, MieError> {
        imageio::load_color_frame(&record.path).map_err(|e| MieError::Load {
            path: record.path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// Writes `<dir>/<stem>.<ext>`.
#[derive(Debug, Clone)]
pub struct FileSink {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl FileSink {
    pub fn new(dir: impl Into<PathBuf>, format: OutputFormat) -> Self {
        Self {
            dir: dir.into(),
            format,
        }
    }

    pub fn path_for(&self, record: &FrameRecord) -> PathBuf {
        self.dir
            .join(format!("{}.{}", record.stem(), self.format.extension()))
    }
}

impl FrameSink for FileSink {
    fn write(&self, record: &FrameRecord, frame: &EnhancedFrame) -> Result<(), MieError> {
        imageio::save_frame(&self.path_for(record), frame.frame(), self.format).map_err(|e| {
            MieError::Sink {
                index: record.sequence_index,
                message: e.to_string(),
            }
        })
    }
}

/// Keeps results in memory keyed by sequence index.
#[derive(Debug, Default)]
pub struct CollectSink {
    frames: Mutex<BTreeMap<usize, EnhancedFrame>>,
}

impl CollectSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_frames(self) -> BTreeMap<usize, EnhancedFrame> {
        self.frames.into_inner().unwrap_or_else(|p| p.into_inner())
    }
}

impl FrameSink for CollectSink {
    fn write(&self, record: &FrameRecord, frame: &EnhancedFrame) -> Result<(), MieError> {
        self.frames
            .lock()
            .unwrap_or_else(|p| p.into_inner())
            .insert(record.sequence_index, frame.clone());
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameFailure {
    pub sequence_index: usize,
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub input_frames: usize,
    pub written: usize,
    pub segments: usize,
    /// Frames dropped under [`EdgePolicy::Skip`].
    pub skipped: usize,
    pub failures: Vec<FrameFailure>,
}

/// Index ranges of contiguous recording; a new range starts where the
/// timestamp gap exceeds `max_gap_factor × nominal_interval_secs`.
pub fn split_segments(
    frames: &[FrameRecord],
    nominal_interval_secs: i64,
    max_gap_factor: f64,
) -> Vec<std::ops::Range<usize>> {
    let limit = max_gap_factor * nominal_interval_secs as f64;
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..frames.len() {
        let gap = (frames[k].timestamp - frames[k - 1].timestamp).num_seconds() as f64;
        if gap > limit {
            out.push(start..k);
            start = k;
        }
    }
    if !frames.is_empty() {
        out.push(start..frames.len());
    }
    out
}

struct ChunkOutcome {
    written: usize,
    skipped: usize,
    failures: Vec<FrameFailure>,
}

fn failure(record: &FrameRecord, err: &MieError) -> FrameFailure {
    FrameFailure {
        sequence_index: record.sequence_index,
        path: record.path.display().to_string(),
        message: err.to_string(),
    }
}

fn process_chunk(
    frames: &[FrameRecord],
    segment: std::ops::Range<usize>,
    chunk: std::ops::Range<usize>,
    cfg: &MieConfig,
    source: &dyn FrameSource,
    sink: &dyn FrameSink,
) -> ChunkOutcome {
    let lo = chunk.start.saturating_sub(1).max(segment.start);
    let hi = (chunk.end + 1).min(segment.end);
    let mut failures = Vec::new();

    let loaded: Vec<Option<(ColorFrame, GrayFrame)>> = (lo..hi)
        .map(|k| {
            let res = source
                .load(&frames[k])
                .and_then(|color| grayscale_blur(&color, cfg).map(|g| (color, g)));
            match res {
                Ok(v) => Some(v),
                Err(e) => {
                    if chunk.contains(&k) {
                        failures.push(failure(&frames[k], &e));
                    }
                    None
                }
            }
        })
        .collect();
    let at = |k: usize| loaded[k - lo].as_ref();

    let (mut written, mut skipped) = (0, 0);
    for k in chunk {
        let Some((color, gray)) = at(k) else { continue };
        let neighbor = |j: Option<usize>| j.filter(|j| segment.contains(j)).and_then(|j| at(j)).map(|(_, g)| g);
        let prev = neighbor(k.checked_sub(1));
        let next = neighbor(Some(k + 1));
        let (prev, next) = match (cfg.edge_policy, prev, next) {
            (_, Some(p), Some(n)) => (p, n),
            (EdgePolicy::Replicate, p, n) => (p.unwrap_or(gray), n.unwrap_or(gray)),
            (EdgePolicy::Skip, _, _) => {
                skipped += 1;
                continue;
            }
        };
        let result = motion_likelihood(prev, gray, next)
            .and_then(|m| compose(color, m))
            .and_then(|e| sink.write(&frames[k], &e));
        match result {
            Ok(()) => written += 1,
            Err(e) => failures.push(failure(&frames[k], &e)),
        }
    }
    ChunkOutcome {
        written,
        skipped,
        failures,
    }
}

/// Enhances every frame of an ordered sequence and streams results to `sink`.
///
/// Neighbors never cross a recording gap. A frame whose neighbor failed to
/// load is treated like a segment edge. Load and write errors are collected
/// per frame; the batch continues. `workers == 0` uses all cores.
pub fn enhance_sequence(
    frames: &[FrameRecord],
    nominal_interval_secs: i64,
    cfg: &MieConfig,
    source: &dyn FrameSource,
    sink: &dyn FrameSink,
    workers: usize,
) -> Result<SequenceReport, MieError> {
    cfg.validate()?;
    if frames.is_empty() {
        return Err(MieError::EmptySequence);
    }
    let segments = split_segments(frames, nominal_interval_secs, cfg.max_gap_factor);
    let jobs: Vec<_> = segments
        .iter()
        .flat_map(|seg| {
            let seg = seg.clone();
            (seg.start..seg.end)
                .step_by(CHUNK)
                .map(move |s| (seg.clone(), s..(s + CHUNK).min(seg.end)))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| MieError::Pool(e.to_string()))?;
    let outcomes: Vec<ChunkOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|(seg, chunk)| process_chunk(frames, seg.clone(), chunk.clone(), cfg, source, sink))
            .collect()
    });

    let mut report = SequenceReport {
        input_frames: frames.len(),
        segments: segments.len(),
        ..Default::default()
    };
    for o in outcomes {
        report.written += o.written;
        report.skipped += o.skipped;
        report.failures.extend(o.failures);
    }
    report.failures.sort_by_key(|f| f.sequence_index);
    Ok(report)
}
