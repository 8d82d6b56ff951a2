//! Frame identity and the labelled objects attached to frames.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::geometry::BoundingBox;
use crate::scalar::Real;

/// Class id of the single "insect" class.
pub const INSECT_CLASS: u16 = 0;

/// Position of one image inside a time-lapse sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameRecord {
    pub site_id: String,
    /// Capture time, 1 s resolution.
    pub timestamp: DateTime<Utc>,
    pub sequence_index: usize,
    pub path: PathBuf,
}

impl FrameRecord {
    pub fn new(
        site_id: impl Into<String>,
        timestamp: DateTime<Utc>,
        sequence_index: usize,
        path: impl Into<PathBuf>,
    ) -> Self {
        Self {
            site_id: site_id.into(),
            timestamp,
            sequence_index,
            path: path.into(),
        }
    }

    /// File stem used to pair images with their sidecar annotation files.
    pub fn stem(&self) -> String {
        stem_of(&self.path)
    }
}

pub(crate) fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Shared handle; detections and annotations of one frame point at the same record.
pub type FrameRef = Arc<FrameRecord>;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("confidence {0} outside [0, 1]")]
pub struct ConfidenceError(pub f64);

/// A ground-truth object.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation<T> {
    pub frame: FrameRef,
    pub bbox: BoundingBox<T>,
    pub class_id: u16,
}

impl<T: Real> Annotation<T> {
    pub fn new(frame: FrameRef, bbox: BoundingBox<T>, class_id: u16) -> Self {
        Self {
            frame,
            bbox,
            class_id,
        }
    }
}

/// A scored prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection<T> {
    pub frame: FrameRef,
    pub bbox: BoundingBox<T>,
    confidence: T,
    pub class_id: u16,
}

impl<T: Real> Detection<T> {
    pub fn new(
        frame: FrameRef,
        bbox: BoundingBox<T>,
        confidence: T,
        class_id: u16,
    ) -> Result<Self, ConfidenceError> {
        if !(confidence >= T::zero() && confidence <= T::one()) {
            return Err(ConfidenceError(confidence.as_f64()));
        }
        Ok(Self {
            frame,
            bbox,
            confidence,
            class_id,
        })
    }

    pub fn confidence(&self) -> T {
        self.confidence
    }

    /// Applies `f` to the confidence; the result must stay in `[0, 1]`.
    pub fn map_confidence(&self, f: impl Fn(T) -> T) -> Result<Self, ConfidenceError> {
        Self::new(self.frame.clone(), self.bbox, f(self.confidence), self.class_id)
    }
}

/// Sorts by descending confidence; ties keep their input order.
pub fn sort_by_confidence<T: Real>(dets: &mut [Detection<T>]) {
    dets.sort_by(|a, b| {
        b.confidence
            .partial_cmp(&a.confidence)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn frame() -> FrameRef {
        Arc::new(FrameRecord::new(
            "S1-0",
            Utc.timestamp_opt(0, 0).unwrap(),
            0,
            "a/t0000.jpg",
        ))
    }

    #[test]
    fn confidence_bounds() {
        let b = BoundingBox::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(Detection::new(frame(), b, 1.0, 0).is_ok());
        assert!(Detection::new(frame(), b, 1.2, 0).is_err());
        assert!(Detection::new(frame(), b, -0.1, 0).is_err());
        assert!(Detection::new(frame(), b, f64::NAN, 0).is_err());
    }

    #[test]
    fn stem_strips_extension() {
        assert_eq!(frame().stem(), "t0000");
    }
}
