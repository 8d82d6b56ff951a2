//! Classical baseline detector over the motion channel: threshold, open,
//! label, filter by area, box.

mod components;

pub use components::{
    connected_components, dilate, disk, erode, label_components, open, Component, Mask, PixelRect,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::Plane;
use crate::geometry::BoundingBox;
use crate::mie::EnhancedFrame;
use crate::record::{sort_by_confidence, Detection, FrameRef, INSECT_CLASS};
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid detector configuration: {0}")]
pub struct DetectorConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    Fixed(u8),
    Otsu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    pub threshold: Threshold,
    pub open_radius: usize,
    pub min_area: usize,
    pub max_area: usize,
    pub pad: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            threshold: Threshold::Fixed(40),
            open_radius: 1,
            min_area: 64,
            max_area: 40_000,
            pad: 2,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), DetectorConfigError> {
        if let Threshold::Fixed(t) = self.threshold {
            if !(1..=254).contains(&t) {
                return Err(DetectorConfigError(format!("threshold {t} outside 1..=254")));
            }
        }
        if self.min_area == 0 || self.min_area >= self.max_area {
            return Err(DetectorConfigError(format!(
                "area range [{}, {}] is empty",
                self.min_area, self.max_area
            )));
        }
        Ok(())
    }
}

/// Otsu's threshold: the first level of the upper class, or `None` for a
/// constant plane.
pub fn otsu_threshold(plane: &Plane) -> Option<u8> {
    let mut hist = [0u64; 256];
    for &v in plane.samples() {
        hist[v as usize] += 1;
    }
    let total = plane.samples().len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
    let (mut w0, mut sum0) = (0f64, 0f64);
    let mut best: Option<(f64, usize)> = None;
    for t in 0..255 {
        w0 += hist[t] as f64;
        sum0 += t as f64 * hist[t] as f64;
        let w1 = total - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let m0 = sum0 / w0;
        let m1 = (sum_all - sum0) / w1;
        let between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if best.is_none_or(|(b, _)| between > b) {
            best = Some((between, t));
        }
    }
    best.map(|(_, t)| (t + 1) as u8)
}

/// Runs the detector on an arbitrary 8-bit plane.
pub fn detect_plane<T: Real>(
    plane: &Plane,
    frame: &FrameRef,
    cfg: &DetectorConfig,
) -> Result<Vec<Detection<T>>, DetectorConfigError> {
    cfg.validate()?;
    let threshold = match cfg.threshold {
        Threshold::Fixed(t) => t,
        Threshold::Otsu => match otsu_threshold(plane) {
            Some(t) => t,
            None => return Ok(Vec::new()),
        },
    };
    let mask = open(&Mask::threshold(plane, threshold), cfg.open_radius);
    let (labels, comps) = label_components(&mask);

    let mut sums = vec![0u64; comps.len() + 1];
    for (&l, &v) in labels.iter().zip(plane.samples()) {
        sums[l as usize] += v as u64;
    }
    let (w, h) = (plane.width(), plane.height());
    let pad = T::of(cfg.pad as f64);
    let mut dets: Vec<Detection<T>> = comps
        .iter()
        .filter(|c| (cfg.min_area..=cfg.max_area).contains(&c.area))
        .filter_map(|c| {
            let r = c.bbox;
            let b = BoundingBox::new(T::of(r.x0 as f64), T::of(r.y0 as f64), T::of(r.x1 as f64), T::of(r.y1 as f64))
                .ok()?
                .pad(pad)
                .clip(w, h)
                .ok()?;
            let mean = sums[c.label as usize] as f64 / c.area as f64;
            Detection::new(frame.clone(), b, T::of(mean / 255.0), INSECT_CLASS).ok()
        })
        .collect();
    sort_by_confidence(&mut dets);
    Ok(dets)
}

/// Detections on the motion (red) channel of an enhanced frame.
pub fn detect<T: Real>(
    frame: &EnhancedFrame,
    record: &FrameRef,
    cfg: &DetectorConfig,
) -> Result<Vec<Detection<T>>, DetectorConfigError> {
    detect_plane(frame.motion(), record, cfg)
}
