//! Motion-informed enhancement (MIE) of time-lapse image sequences, with
//! a baseline detector, detection evaluation and abundance analysis.
//!
//! Geometry, detections and metrics are generic over the scalar type
//! ([`Real`], implemented for `f32` and `f64`); the aliases below fix it to
//! `f64`, which is what the file formats and the CLI use.

pub mod abundance;
pub mod detector;
pub mod eval;
pub mod frame;
pub mod geometry;
pub mod imageio;
pub mod ingest;
pub mod mie;
pub mod record;
pub mod scalar;
pub mod synth;

pub use frame::{ColorFrame, GrayFrame, MotionLikelihood, Plane};
pub use geometry::{iou, BoundingBox};
pub use mie::{enhance, enhance_sequence, grayscale_blur, motion_likelihood, EnhancedFrame, MieConfig};
pub use record::{FrameRecord, FrameRef};
pub use scalar::Real;

pub type BBox = BoundingBox<f64>;
pub type Annotation = record::Annotation<f64>;
pub type Detection = record::Detection<f64>;

pub type BBoxF32 = BoundingBox<f32>;
pub type AnnotationF32 = record::Annotation<f32>;
pub type DetectionF32 = record::Detection<f32>;
pub type EvalReport = eval::EvalReport<f64>;
