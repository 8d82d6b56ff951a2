//! Motion-informed enhancement of time-lapse frames.
//!
//! Each frame is rewritten so that its red channel carries a three-frame
//! difference of blurred luminance, its green channel is kept verbatim and
//! its blue channel holds the rounded mean of the original red and blue.
//! The result is an ordinary 8-bit RGB image that any detector can consume.

pub mod blur;
mod sequence;

pub use sequence::{
    enhance_sequence, split_segments, CollectSink, FileSink, FileSource, FrameFailure, FrameSink,
    FrameSource, SequenceReport,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{ColorFrame, FrameError, GrayFrame, MotionLikelihood, Plane};

pub const MAX_KERNEL_SIZE: usize = 25;

#[derive(Debug, Error)]
pub enum MieError {
    #[error("invalid MIE configuration: {0}")]
    InvalidConfig(String),
    #[error("{kernel}x{kernel} kernel does not fit a {width}x{height} frame")]
    FrameTooSmall {
        width: usize,
        height: usize,
        kernel: usize,
    },
    #[error("frame dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("empty frame sequence")]
    EmptySequence,
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("failed to load frame {path}: {message}")]
    Load { path: String, message: String },
    #[error("failed to write frame {index}: {message}")]
    Sink { index: usize, message: String },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Smoothing kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// Outer product of a binomial row; integer exact.
    #[default]
    Binomial,
    /// Sampled Gaussian with `blur_sigma`.
    Gaussian,
}

/// Treatment of the first and last frame of a segment, which lack a neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgePolicy {
    /// Missing neighbors are replaced by the frame itself.
    #[default]
    #[serde(alias = "replicateedge")]
    Replicate,
    /// Frames without both neighbors are not emitted.
    #[serde(alias = "skipedges")]
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MieConfig {
    pub blur_kernel_size: usize,
    pub blur_sigma: f64,
    pub kernel: KernelKind,
    pub grayscale_weights: [f64; 3],
    pub edge_policy: EdgePolicy,
    /// A timestamp gap larger than this multiple of the nominal interval
    /// starts a new segment.
    pub max_gap_factor: f64,
}

impl Default for MieConfig {
    fn default() -> Self {
        Self {
            blur_kernel_size: 5,
            blur_sigma: 1.1,
            kernel: KernelKind::Binomial,
            grayscale_weights: [0.299, 0.587, 0.114],
            edge_policy: EdgePolicy::Replicate,
            max_gap_factor: 3.0,
        }
    }
}

impl MieConfig {
    pub fn validate(&self) -> Result<(), MieError> {
        let k = self.blur_kernel_size;
        if k < 3 || k % 2 == 0 || k > MAX_KERNEL_SIZE {
            return Err(MieError::InvalidConfig(format!(
                "kernel size {k} must be odd and within 3..={MAX_KERNEL_SIZE}"
            )));
        }
        if !(self.blur_sigma > 0.0 && self.blur_sigma.is_finite()) {
            return Err(MieError::InvalidConfig(format!(
                "sigma {} must be positive",
                self.blur_sigma
            )));
        }
        let w = self.grayscale_weights;
        if w.iter().any(|v| !(*v >= 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(MieError::InvalidConfig(format!(
                "grayscale weights {w:?} must be nonnegative and sum to 1"
            )));
        }
        if !(self.max_gap_factor >= 1.0) {
            return Err(MieError::InvalidConfig(format!(
                "gap factor {} must be at least 1",
                self.max_gap_factor
            )));
        }
        Ok(())
    }

    /// Pixels a change can spread by through the blur.
    pub fn blur_radius(&self) -> usize {
        self.blur_kernel_size / 2
    }
}

/// A color frame whose channels carry the enhanced red, original green and
/// mixed blue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnhancedFrame(ColorFrame);

impl EnhancedFrame {
    pub fn frame(&self) -> &ColorFrame {
        &self.0
    }

    pub fn into_frame(self) -> ColorFrame {
        self.0
    }

    pub fn motion(&self) -> &Plane {
        self.0.red()
    }

    /// Wraps an existing frame, e.g. one read back from disk.
    pub fn from_frame(frame: ColorFrame) -> Self {
        Self(frame)
    }
}

/// Luminance followed by smoothing.
pub fn grayscale_blur(frame: &ColorFrame, cfg: &MieConfig) -> Result<GrayFrame, MieError> {
    cfg.validate()?;
    let k = cfg.blur_kernel_size;
    if k > frame.width() || k > frame.height() {
        return Err(MieError::FrameTooSmall {
            width: frame.width(),
            height: frame.height(),
            kernel: k,
        });
    }
    let gray = blur::luminance(frame, cfg.grayscale_weights);
    let blurred = match cfg.kernel {
        KernelKind::Binomial => blur::binomial_blur(&gray, k),
        KernelKind::Gaussian => blur::gaussian_blur(&gray, k, cfg.blur_sigma),
    };
    Ok(GrayFrame::new(blurred))
}

fn check_dims(a: &Plane, b: &Plane) -> Result<(), MieError> {
    if a.same_dims(b) {
        Ok(())
    } else {
        Err(MieError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ))
    }
}

/// `|curr - prev| + |next - curr|` per pixel, saturated at 255.
pub fn motion_likelihood(
    prev: &GrayFrame,
    curr: &GrayFrame,
    next: &GrayFrame,
) -> Result<MotionLikelihood, MieError> {
    check_dims(curr.plane(), prev.plane())?;
    check_dims(curr.plane(), next.plane())?;
    let samples = prev
        .plane()
        .samples()
        .iter()
        .zip(curr.plane().samples())
        .zip(next.plane().samples())
        .map(|((&p, &c), &n)| c.abs_diff(p).saturating_add(n.abs_diff(c)))
        .collect();
    Ok(MotionLikelihood::new(Plane::new(
        curr.width(),
        curr.height(),
        samples,
    )?))
}

/// Builds the enhanced frame from the current color frame and a motion plane.
pub fn compose(curr: &ColorFrame, motion: MotionLikelihood) -> Result<EnhancedFrame, MieError> {
    check_dims(curr.red(), motion.plane())?;
    let blue: Vec<u8> = curr
        .blue()
        .samples()
        .iter()
        .zip(curr.red().samples())
        .map(|(&b, &r)| ((b as u16 + r as u16 + 1) >> 1) as u8)
        .collect();
    let frame = ColorFrame::new(
        curr.width(),
        curr.height(),
        motion.into_plane().into_samples(),
        curr.green().samples().to_vec(),
        blue,
    )?;
    Ok(EnhancedFrame(frame))
}

/// Enhances `curr` using its two temporal neighbors.
pub fn enhance(
    prev: &ColorFrame,
    curr: &ColorFrame,
    next: &ColorFrame,
    cfg: &MieConfig,
) -> Result<EnhancedFrame, MieError> {
    for other in [prev, next] {
        check_dims(curr.red(), other.red())?;
    }
    let g_prev = grayscale_blur(prev, cfg)?;
    let g_curr = grayscale_blur(curr, cfg)?;
    let g_next = grayscale_blur(next, cfg)?;
    compose(curr, motion_likelihood(&g_prev, &g_curr, &g_next)?)
}
