//! Synthetic time-lapse sequences of small moving blobs with exact ground
//! truth, for tests and desk-scale benchmarks.
//!
//! All randomness comes from ChaCha8 streams seeded from the config, so a
//! config always renders to the same bytes on every platform.

mod background;
mod render;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, Duration, Utc};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::ColorFrame;
use crate::geometry::BoundingBox;
use crate::imageio::{self, OutputFormat};
use crate::ingest::{self, CameraView, SequenceManifest};
use crate::record::{Annotation, FrameRecord, INSECT_CLASS};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synthetic config: {0}")]
    ConfigInvalid(String),
    #[error("background image: {0}")]
    Background(#[from] imageio::ImageIoError),
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Background {
    Flat {
        color: [u8; 3],
    },
    /// Smooth value noise around `color`: random lattice values every
    /// `cell` pixels, interpolated with smoothstep, scaled by `amplitude`.
    Noise {
        seed: u64,
        amplitude: f64,
        color: [u8; 3],
        #[serde(default = "default_cell")]
        cell: usize,
    },
    /// An image file, sampled with clamped edges.
    Textured {
        path: PathBuf,
    },
}

fn default_cell() -> usize {
    16
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InsectPath {
    /// Moves along the polyline at `speed` px/frame, reversing at the ends.
    /// A single point is a stationary insect.
    Waypoints { points: Vec<[f64; 2]>, speed: f64 },
    /// Steps `step` px per frame in a random direction, reflecting off the
    /// frame border.
    RandomWalk { seed: u64, step: f64, start: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsectSpec {
    /// Horizontal semi-axis in pixels.
    pub radius: f64,
    /// Vertical semi-axis as a multiple of `radius`.
    #[serde(default = "one")]
    pub aspect: f64,
    pub color: [u8; 3],
    pub path: InsectPath,
    /// Inclusive frame range; all frames when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visible: Option<[usize; 2]>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub width: usize,
    pub height: usize,
    pub frame_count: usize,
    #[serde(default = "default_interval")]
    pub interval_secs: i64,
    pub background: Background,
    /// Maximum global background shift per frame, in pixels.
    #[serde(default)]
    pub background_jitter: f64,
    /// Per-frame, per-pixel uniform noise amplitude.
    #[serde(default)]
    pub sensor_noise: f64,
    #[serde(default)]
    pub insects: Vec<InsectSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_site")]
    pub site: String,
    #[serde(default = "default_start")]
    pub start: DateTime<Utc>,
}

fn default_interval() -> i64 {
    ingest::DEFAULT_INTERVAL_SECS
}

fn default_site() -> String {
    "synth".into()
}

fn default_start() -> DateTime<Utc> {
    DateTime::from_timestamp(1_654_057_800, 0).expect("valid")
}

impl SynthConfig {
    /// Flat background, no insects.
    pub fn flat(width: usize, height: usize, frame_count: usize, color: [u8; 3]) -> Self {
        Self {
            width,
            height,
            frame_count,
            interval_secs: default_interval(),
            background: Background::Flat { color },
            background_jitter: 0.0,
            sensor_noise: 0.0,
            insects: Vec::new(),
            seed: 0,
            site: default_site(),
            start: default_start(),
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::ConfigInvalid(m));
        if self.width < 3 || self.height < 3 {
            return bad(format!("frame {}x{} smaller than 3x3", self.width, self.height));
        }
        if self.frame_count == 0 {
            return bad("frame_count must be positive".into());
        }
        if self.interval_secs <= 0 {
            return bad("interval must be positive".into());
        }
        if !(self.background_jitter >= 0.0) || !(self.sensor_noise >= 0.0) {
            return bad("jitter and sensor noise must be nonnegative".into());
        }
        if let Background::Noise { cell, amplitude, .. } = &self.background {
            if *cell == 0 || !(*amplitude >= 0.0) {
                return bad("noise cell must be positive and amplitude nonnegative".into());
            }
        }
        let inside = |p: &[f64; 2]| {
            (0.0..=self.width as f64).contains(&p[0]) && (0.0..=self.height as f64).contains(&p[1])
        };
        for (i, ins) in self.insects.iter().enumerate() {
            if !(ins.radius >= 2.0) || !(ins.radius * ins.aspect >= 2.0) {
                return bad(format!("insect {i}: semi-axes must be at least 2 px"));
            }
            match &ins.path {
                InsectPath::Waypoints { points, speed } => {
                    if points.is_empty() || !(*speed >= 0.0) {
                        return bad(format!("insect {i}: needs a waypoint and a nonnegative speed"));
                    }
                    if let Some(p) = points.iter().find(|p| !inside(p)) {
                        return bad(format!("insect {i}: waypoint {p:?} outside the frame"));
                    }
                }
                InsectPath::RandomWalk { step, start, .. } => {
                    if !(*step >= 0.0) || !inside(start) {
                        return bad(format!("insect {i}: bad random walk start or step"));
                    }
                }
            }
            if let Some([a, b]) = ins.visible {
                if a > b {
                    return bad(format!("insect {i}: empty visible range {a}..={b}"));
                }
            }
        }
        Ok(())
    }
}

/// Rendered frames with their records and per-frame ground truth.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub records: Vec<Arc<FrameRecord>>,
    pub frames: Vec<ColorFrame>,
    pub truth: Vec<Vec<Annotation<f64>>>,
}

/// Uniform in `[0, 1)` from the top 53 bits.
pub(crate) fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn frame_name(k: usize) -> String {
    format!("t{k:05}")
}

/// Ellipse centers per frame for one insect.
fn trajectory(ins: &InsectSpec, frames: usize, width: usize, height: usize) -> Vec<(f64, f64)> {
    match &ins.path {
        InsectPath::Waypoints { points, speed } => {
            let seg: Vec<f64> = points
                .windows(2)
                .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt())
                .collect();
            let total: f64 = seg.iter().sum();
            let start = ins.visible.map(|v| v[0]).unwrap_or(0);
            (0..frames)
                .map(|k| {
                    if total == 0.0 {
                        return (points[0][0], points[0][1]);
                    }
                    let s = speed * k.saturating_sub(start) as f64;
                    let mut s = s % (2.0 * total);
                    if s > total {
                        s = 2.0 * total - s;
                    }
                    for (i, &len) in seg.iter().enumerate() {
                        if s <= len || i == seg.len() - 1 {
                            let t = if len > 0.0 { (s / len).min(1.0) } else { 0.0 };
                            let (a, b) = (points[i], points[i + 1]);
                            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]));
                        }
                        s -= len;
                    }
                    unreachable!("segments cover the path")
                })
                .collect()
        }
        InsectPath::RandomWalk { seed, step, start } => {
            let mut r = rng(*seed, 2);
            let (rx, ry) = (ins.radius, ins.radius * ins.aspect);
            let reflect = |v: f64, lo: f64, hi: f64| {
                if hi <= lo {
                    return (lo + hi) / 2.0;
                }
                let mut v = v;
                while v < lo || v > hi {
                    v = if v < lo { 2.0 * lo - v } else { 2.0 * hi - v };
                }
                v
            };
            let (xmax, ymax) = (width as f64 - rx, height as f64 - ry);
            let mut p = (reflect(start[0], rx, xmax), reflect(start[1], ry, ymax));
            let mut out = Vec::with_capacity(frames);
            for _ in 0..frames {
                out.push(p);
                let a = unit(&mut r) * std::f64::consts::TAU;
                p = (reflect(p.0 + step * a.cos(), rx, xmax), reflect(p.1 + step * a.sin(), ry, ymax));
            }
            out
        }
    }
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthOutput, SynthError> {
    cfg.validate()?;
    let bg = background::Canvas::build(cfg)?;
    let paths: Vec<Vec<(f64, f64)>> = cfg
        .insects
        .iter()
        .map(|i| trajectory(i, cfg.frame_count, cfg.width, cfg.height))
        .collect();
    let mut jitter_rng = rng(cfg.seed, 0);
    let mut noise_rng = rng(cfg.seed, 1);

    let mut out = SynthOutput {
        records: Vec::with_capacity(cfg.frame_count),
        frames: Vec::with_capacity(cfg.frame_count),
        truth: Vec::with_capacity(cfg.frame_count),
    };
    for k in 0..cfg.frame_count {
        let (dx, dy) = if cfg.background_jitter > 0.0 {
            let j = cfg.background_jitter;
            ((unit(&mut jitter_rng) * 2.0 - 1.0) * j, (unit(&mut jitter_rng) * 2.0 - 1.0) * j)
        } else {
            (0.0, 0.0)
        };
        let mut canvas = bg.sample(dx, dy);
        let record = Arc::new(FrameRecord::new(
            cfg.site.clone(),
            cfg.start + Duration::seconds(cfg.interval_secs * k as i64),
            k,
            format!("{}.png", frame_name(k)),
        ));
        let mut truth = Vec::new();
        for (ins, path) in cfg.insects.iter().zip(&paths) {
            if let Some([a, b]) = ins.visible {
                if k < a || k > b {
                    continue;
                }
            }
            let (cx, cy) = path[k];
            let (rx, ry) = (ins.radius, ins.radius * ins.aspect);
            render::ellipse(&mut canvas, cfg.width, cfg.height, cx, cy, rx, ry, ins.color);
            if let Ok(b) = BoundingBox::new(cx - rx, cy - ry, cx + rx, cy + ry).and_then(|b| b.clip(cfg.width, cfg.height)) {
                truth.push(Annotation::new(record.clone(), b, INSECT_CLASS));
            }
        }
        out.frames.push(render::quantize(&canvas, cfg.width, cfg.height, cfg.sensor_noise, &mut noise_rng));
        out.records.push(record);
        out.truth.push(truth);
    }
    Ok(out)
}

/// Writes `frames/<name>.png`, `truth/<name>.txt` and `manifest.csv` under `dir`.
pub fn write_dataset(dir: &Path, cfg: &SynthConfig, out: &SynthOutput) -> Result<SequenceManifest, SynthError> {
    let frames_dir = dir.join("frames");
    let truth_dir = dir.join("truth");
    for d in [&frames_dir, &truth_dir] {
        std::fs::create_dir_all(d).map_err(|e| SynthError::Io {
            path: d.display().to_string(),
            source: e,
        })?;
    }
    let mut records = Vec::with_capacity(out.frames.len());
    for ((rec, frame), truth) in out.records.iter().zip(&out.frames).zip(&out.truth) {
        let path = frames_dir.join(&rec.path);
        imageio::save_frame(&path, frame, OutputFormat::Png)?;
        ingest::write_annotations(&truth_dir.join(format!("{}.txt", rec.stem())), truth, cfg.width, cfg.height)?;
        records.push(FrameRecord::new(rec.site_id.clone(), rec.timestamp, rec.sequence_index, path));
    }
    let manifest = SequenceManifest {
        site_id: cfg.site.clone(),
        camera_view: CameraView::Top,
        plant: "synthetic".into(),
        nominal_interval_secs: cfg.interval_secs,
        frames: records,
    };
    // paths in the manifest are relative to its directory
    let relative = SequenceManifest {
        frames: manifest
            .frames
            .iter()
            .map(|f| {
                let rel = f.path.strip_prefix(dir).map(Path::to_path_buf).unwrap_or_else(|_| f.path.clone());
                FrameRecord::new(f.site_id.clone(), f.timestamp, f.sequence_index, rel)
            })
            .collect(),
        ..manifest.clone()
    };
    ingest::write_manifest_csv(&dir.join("manifest.csv"), &[relative])?;
    Ok(manifest)
}
