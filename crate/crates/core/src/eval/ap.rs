use serde::{Deserialize, Serialize};

use super::{match_frame, EvalError};
use crate::record::{Annotation, Detection};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    /// Area under the monotone precision envelope at every recall step.
    #[default]
    AllPoint,
    /// Mean envelope precision at recall 0, 0.1, …, 1.
    ElevenPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint<T> {
    pub confidence: T,
    pub recall: T,
    pub precision: T,
}

/// Precision/recall after each detection, in descending confidence order.
///
/// Every frame is matched greedily; the resulting TP/FP labels are then
/// swept globally. Equal confidences keep frame order, then in-frame order.
pub fn pr_curve<'a, T: Real>(
    frames: impl IntoIterator<Item = (&'a [Detection<T>], &'a [Annotation<T>])>,
    iou_thresh: T,
) -> Result<Vec<PrPoint<T>>, EvalError> {
    let mut labelled: Vec<(T, bool)> = Vec::new();
    let mut n_truth = 0usize;
    for (dets, anns) in frames {
        n_truth += anns.len();
        let m = match_frame(dets, anns, iou_thresh);
        let mut is_tp = vec![false; dets.len()];
        for p in &m.true_positives {
            is_tp[p.detection] = true;
        }
        let mut frame_labels: Vec<(T, bool)> = dets.iter().zip(is_tp).map(|(d, t)| (d.confidence(), t)).collect();
        frame_labels.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
        labelled.extend(frame_labels);
    }
    if n_truth == 0 {
        return Err(EvalError::NoGroundTruth);
    }
    labelled.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let total = T::of(n_truth as f64);
    let (mut tp, mut seen) = (0usize, 0usize);
    Ok(labelled
        .into_iter()
        .map(|(confidence, hit)| {
            seen += 1;
            tp += usize::from(hit);
            PrPoint {
                confidence,
                recall: T::of(tp as f64) / total,
                precision: T::of(tp as f64) / T::of(seen as f64),
            }
        })
        .collect())
}

/// Single-class average precision at `iou_thresh`.
pub fn average_precision<'a, T: Real>(
    frames: impl IntoIterator<Item = (&'a [Detection<T>], &'a [Annotation<T>])>,
    iou_thresh: T,
    interp: Interpolation,
) -> Result<T, EvalError> {
    let curve = pr_curve(frames, iou_thresh)?;
    // envelope[i] = max precision at any point from i onward
    let mut envelope: Vec<T> = curve.iter().map(|p| p.precision).collect();
    for i in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[i] = envelope[i].max(envelope[i + 1]);
    }
    Ok(match interp {
        Interpolation::AllPoint => {
            let mut prev_recall = T::zero();
            let mut area = T::zero();
            for (p, &env) in curve.iter().zip(&envelope) {
                area = area + (p.recall - prev_recall) * env;
                prev_recall = p.recall;
            }
            area
        }
        Interpolation::ElevenPoint => {
            let mut sum = T::zero();
            for i in 0..=10 {
                let level = T::of(i as f64 / 10.0);
                let best = curve
                    .iter()
                    .zip(&envelope)
                    .find(|(p, _)| p.recall >= level)
                    .map(|(_, &e)| e)
                    .unwrap_or(T::zero());
                sum = sum + best;
            }
            sum / T::of(11.0)
        }
    })
}
