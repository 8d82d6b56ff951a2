//! Normalized box text files: one object per line,
//! `class cx cy w h` for annotations and `class cx cy w h confidence` for
//! detections, all coordinates relative to the frame size.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::IngestError;
use crate::geometry::{BoundingBox, GeometryError};
use crate::record::{sort_by_confidence, Annotation, Detection, FrameRef};
use crate::scalar::Real;

/// Pixel box from normalized center/extent, clipped to the frame.
pub fn denormalize<T: Real>(
    cx: T,
    cy: T,
    w: T,
    h: T,
    frame_w: usize,
    frame_h: usize,
) -> Result<BoundingBox<T>, GeometryError> {
    let fw = T::of(frame_w as f64);
    let fh = T::of(frame_h as f64);
    let two = T::of(2.0);
    BoundingBox::new(
        (cx - w / two) * fw,
        (cy - h / two) * fh,
        (cx + w / two) * fw,
        (cy + h / two) * fh,
    )?
    .clip(frame_w, frame_h)
}

/// Normalized `(cx, cy, w, h)` of a pixel box.
pub fn normalize<T: Real>(b: &BoundingBox<T>, frame_w: usize, frame_h: usize) -> [T; 4] {
    let fw = T::of(frame_w as f64);
    let fh = T::of(frame_h as f64);
    let (cx, cy) = b.center();
    [cx / fw, cy / fh, b.width() / fw, b.height() / fh]
}

struct Row {
    line: usize,
    class_id: u16,
    coords: [f64; 4],
    confidence: Option<f64>,
}

fn parse_rows(text: &str, path: &str, with_confidence: bool) -> Result<Vec<Row>, IngestError> {
    let want = if with_confidence { 6 } else { 5 };
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let malformed = |reason: String| IngestError::MalformedLine {
            path: path.to_string(),
            line,
            reason,
        };
        if fields.len() != want {
            return Err(malformed(format!("expected {want} fields, found {}", fields.len())));
        }
        let class_id: u16 = fields[0]
            .parse()
            .map_err(|_| malformed(format!("bad class id {:?}", fields[0])))?;
        let mut nums = [0f64; 5];
        for (slot, tok) in nums.iter_mut().zip(&fields[1..]) {
            *slot = tok
                .parse()
                .map_err(|_| malformed(format!("bad number {tok:?}")))?;
        }
        let coords = [nums[0], nums[1], nums[2], nums[3]];
        for &v in &coords {
            if !(0.0..=1.0).contains(&v) {
                return Err(IngestError::ValueOutOfRange {
                    path: path.to_string(),
                    line,
                    value: v,
                });
            }
        }
        let confidence = with_confidence.then_some(nums[4]);
        if let Some(c) = confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(IngestError::ConfidenceOutOfRange {
                    path: path.to_string(),
                    line,
                    value: c,
                });
            }
        }
        rows.push(Row {
            line,
            class_id,
            coords,
            confidence,
        });
    }
    Ok(rows)
}

fn row_box<T: Real>(row: &Row, path: &str, frame_w: usize, frame_h: usize) -> Result<BoundingBox<T>, IngestError> {
    let [cx, cy, w, h] = row.coords.map(T::of);
    denormalize(cx, cy, w, h, frame_w, frame_h).map_err(|_| IngestError::ValueOutOfRange {
        path: path.to_string(),
        line: row.line,
        value: row.coords[2].min(row.coords[3]),
    })
}

pub fn parse_annotations<T: Real>(
    text: &str,
    path: &str,
    frame: &FrameRef,
    frame_w: usize,
    frame_h: usize,
) -> Result<Vec<Annotation<T>>, IngestError> {
    parse_rows(text, path, false)?
        .iter()
        .map(|r| Ok(Annotation::new(frame.clone(), row_box(r, path, frame_w, frame_h)?, r.class_id)))
        .collect()
}

/// Parsed detections, sorted by descending confidence.
pub fn parse_detections<T: Real>(
    text: &str,
    path: &str,
    frame: &FrameRef,
    frame_w: usize,
    frame_h: usize,
) -> Result<Vec<Detection<T>>, IngestError> {
    let mut dets = parse_rows(text, path, true)?
        .iter()
        .map(|r| {
            let conf = r.confidence.expect("detection rows carry confidence");
            Detection::new(frame.clone(), row_box(r, path, frame_w, frame_h)?, T::of(conf), r.class_id)
                .map_err(|e| IngestError::ConfidenceOutOfRange {
                    path: path.to_string(),
                    line: r.line,
                    value: e.0,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    sort_by_confidence(&mut dets);
    Ok(dets)
}

fn read_text(path: &Path) -> Result<String, IngestError> {
    fs::read_to_string(path).map_err(|e| IngestError::io(path, e))
}

/// Reads a sidecar annotation file; an empty file is a background image.
pub fn read_annotations<T: Real>(
    path: &Path,
    frame: &FrameRef,
    frame_w: usize,
    frame_h: usize,
) -> Result<Vec<Annotation<T>>, IngestError> {
    parse_annotations(&read_text(path)?, &path.display().to_string(), frame, frame_w, frame_h)
}

pub fn read_detections<T: Real>(
    path: &Path,
    frame: &FrameRef,
    frame_w: usize,
    frame_h: usize,
) -> Result<Vec<Detection<T>>, IngestError> {
    parse_detections(&read_text(path)?, &path.display().to_string(), frame, frame_w, frame_h)
}

fn push_coords<T: Real>(out: &mut String, class_id: u16, b: &BoundingBox<T>, frame_w: usize, frame_h: usize) {
    let [cx, cy, w, h] = normalize(b, frame_w, frame_h);
    let _ = write!(
        out,
        "{} {:.6} {:.6} {:.6} {:.6}",
        class_id,
        cx.as_f64(),
        cy.as_f64(),
        w.as_f64(),
        h.as_f64()
    );
}

pub fn format_annotation_line<T: Real>(a: &Annotation<T>, frame_w: usize, frame_h: usize) -> String {
    let mut s = String::new();
    push_coords(&mut s, a.class_id, &a.bbox, frame_w, frame_h);
    s
}

pub fn format_detection_line<T: Real>(d: &Detection<T>, frame_w: usize, frame_h: usize) -> String {
    let mut s = String::new();
    push_coords(&mut s, d.class_id, &d.bbox, frame_w, frame_h);
    let _ = write!(s, " {:.6}", d.confidence().as_f64());
    s
}

fn write_lines(path: &Path, lines: impl Iterator<Item = String>) -> Result<(), IngestError> {
    let mut text = String::new();
    for l in lines {
        text.push_str(&l);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| IngestError::io(path, e))
}

pub fn write_annotations<T: Real>(
    path: &Path,
    anns: &[Annotation<T>],
    frame_w: usize,
    frame_h: usize,
) -> Result<(), IngestError> {
    write_lines(path, anns.iter().map(|a| format_annotation_line(a, frame_w, frame_h)))
}

pub fn write_detections<T: Real>(
    path: &Path,
    dets: &[Detection<T>],
    frame_w: usize,
    frame_h: usize,
) -> Result<(), IngestError> {
    write_lines(path, dets.iter().map(|d| format_detection_line(d, frame_w, frame_h)))
}
