//! Detection evaluation: greedy IoU matching, precision/recall/F1 with
//! micro and macro site aggregation, and single-class AP.

mod ap;
mod report;

pub use ap::{average_precision, pr_curve, Interpolation, PrPoint};
pub use report::{report_to_csv, report_to_text};

use std::collections::BTreeMap;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::iou;
use crate::record::{Annotation, Detection};
use crate::scalar::Real;

pub const DEFAULT_IOU: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no ground-truth objects; AP is undefined")]
    NoGroundTruth,
    #[error("no sites to aggregate")]
    NoSites,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        Self { tp, fp, fn_ }
    }

    pub fn metrics<T: Real>(&self) -> Metrics<T> {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                T::zero()
            } else {
                T::of(num as f64) / T::of(den as f64)
            }
        };
        let precision = ratio(self.tp, self.tp + self.fp);
        let recall = ratio(self.tp, self.tp + self.fn_);
        Metrics {
            recall,
            precision,
            f1: harmonic_mean(precision, recall),
        }
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        *self = *self + o;
    }
}

impl Sum for Counts {
    fn sum<I: Iterator<Item = Counts>>(iter: I) -> Counts {
        iter.fold(Counts::default(), Add::add)
    }
}

/// `2pr / (p + r)`, or 0 when both are 0.
pub fn harmonic_mean<T: Real>(p: T, r: T) -> T {
    if p + r > T::zero() {
        T::of(2.0) * p * r / (p + r)
    } else {
        T::zero()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Metrics<T> {
    pub recall: T,
    pub precision: T,
    pub f1: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchPair<T> {
    pub detection: usize,
    pub annotation: usize,
    pub iou: T,
}

/// Outcome of matching one frame. Indices refer to the input slices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult<T> {
    pub true_positives: Vec<MatchPair<T>>,
    pub false_positives: Vec<usize>,
    pub false_negatives: Vec<usize>,
}

impl<T> MatchResult<T> {
    pub fn counts(&self) -> Counts {
        Counts::new(
            self.true_positives.len(),
            self.false_positives.len(),
            self.false_negatives.len(),
        )
    }
}

/// Detection indices by descending confidence; ties keep input order.
fn confidence_order<T: Real>(dets: &[Detection<T>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[b]
            .confidence()
            .partial_cmp(&dets[a].confidence())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    order
}

/// Greedy matching: detections in descending confidence each take the
/// still-unmatched annotation of highest IoU, if that IoU reaches
/// `iou_thresh`. IoU ties go to the lower annotation index.
pub fn match_frame<T: Real>(
    dets: &[Detection<T>],
    anns: &[Annotation<T>],
    iou_thresh: T,
) -> MatchResult<T> {
    let mut taken = vec![false; anns.len()];
    let mut tps = Vec::new();
    let mut fps = Vec::new();
    for d in confidence_order(dets) {
        let mut best: Option<(usize, T)> = None;
        for (a, ann) in anns.iter().enumerate() {
            if taken[a] {
                continue;
            }
            let v = iou(&dets[d].bbox, &ann.bbox);
            if v >= iou_thresh && best.is_none_or(|(_, b)| v > b) {
                best = Some((a, v));
            }
        }
        match best {
            Some((a, v)) => {
                taken[a] = true;
                tps.push(MatchPair {
                    detection: d,
                    annotation: a,
                    iou: v,
                });
            }
            None => fps.push(d),
        }
    }
    MatchResult {
        true_positives: tps,
        false_positives: fps,
        false_negatives: (0..anns.len()).filter(|&a| !taken[a]).collect(),
    }
}

/// Detections and ground truth of a single frame.
#[derive(Debug, Clone)]
pub struct FrameEval<T> {
    pub site: String,
    pub detections: Vec<Detection<T>>,
    pub annotations: Vec<Annotation<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteRow<T> {
    pub site: String,
    pub counts: Counts,
    pub metrics: Metrics<T>,
    /// `None` when the site has no ground truth.
    pub ap50: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport<T> {
    pub sites: Vec<SiteRow<T>>,
    /// Unweighted mean of site metrics; F1 is the mean of site F1 values.
    pub macro_avg: Metrics<T>,
    /// Mean of the defined site APs.
    pub macro_ap50: Option<T>,
    /// Metrics of the summed counts.
    pub micro: Metrics<T>,
    pub micro_counts: Counts,
    /// AP over the pooled detections of all sites.
    pub micro_ap50: Option<T>,
}

/// Micro and macro averages of per-site totals, in the given site order.
pub fn aggregate<T: Real>(site_counts: &[(String, Counts)]) -> Result<EvalReport<T>, EvalError> {
    if site_counts.is_empty() {
        return Err(EvalError::NoSites);
    }
    let sites: Vec<SiteRow<T>> = site_counts
        .iter()
        .map(|(s, c)| SiteRow {
            site: s.clone(),
            counts: *c,
            metrics: c.metrics(),
            ap50: None,
        })
        .collect();
    let n = T::of(sites.len() as f64);
    let mean = |f: fn(&Metrics<T>) -> T| sites.iter().map(|r| f(&r.metrics)).fold(T::zero(), |a, b| a + b) / n;
    let macro_avg = Metrics {
        recall: mean(|m| m.recall),
        precision: mean(|m| m.precision),
        f1: mean(|m| m.f1),
    };
    let micro_counts: Counts = site_counts.iter().map(|(_, c)| *c).sum();
    Ok(EvalReport {
        macro_avg,
        macro_ap50: None,
        micro: micro_counts.metrics(),
        micro_counts,
        micro_ap50: None,
        sites,
    })
}

/// Matches every frame, groups by site (sorted by name) and fills in AP.
pub fn evaluate<T: Real>(
    frames: &[FrameEval<T>],
    iou_thresh: T,
    interp: Interpolation,
) -> Result<EvalReport<T>, EvalError> {
    let mut by_site: BTreeMap<&str, Vec<&FrameEval<T>>> = BTreeMap::new();
    for f in frames {
        by_site.entry(f.site.as_str()).or_default().push(f);
    }
    let site_counts: Vec<(String, Counts)> = by_site
        .iter()
        .map(|(site, fs)| {
            let c = fs
                .iter()
                .map(|f| match_frame(&f.detections, &f.annotations, iou_thresh).counts())
                .sum();
            (site.to_string(), c)
        })
        .collect();
    let mut report = aggregate::<T>(&site_counts)?;

    for row in report.sites.iter_mut() {
        row.ap50 = average_precision(by_site[row.site.as_str()].iter().map(|f| pairs(f)), iou_thresh, interp).ok();
    }
    let defined: Vec<T> = report.sites.iter().filter_map(|r| r.ap50).collect();
    if !defined.is_empty() {
        let sum = defined.iter().fold(T::zero(), |a, &b| a + b);
        report.macro_ap50 = Some(sum / T::of(defined.len() as f64));
    }
    report.micro_ap50 = average_precision(frames.iter().map(pairs), iou_thresh, interp).ok();
    Ok(report)
}

fn pairs<T>(f: &FrameEval<T>) -> (&[Detection<T>], &[Annotation<T>]) {
    (&f.detections, &f.annotations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingBox;
    use crate::record::{FrameRecord, FrameRef};
    use chrono::{TimeZone, Utc};
    use std::sync::Arc;

    fn rec() -> FrameRef {
        Arc::new(FrameRecord::new("S", Utc.timestamp_opt(0, 0).unwrap(), 0, "f.png"))
    }

    fn det(x: f64, w: f64, conf: f64) -> Detection<f64> {
        Detection::new(rec(), BoundingBox::new(x, 0.0, x + w, 10.0).unwrap(), conf, 0).unwrap()
    }

    fn ann(x: f64, w: f64) -> Annotation<f64> {
        Annotation::new(rec(), BoundingBox::new(x, 0.0, x + w, 10.0).unwrap(), 0)
    }

    #[test]
    fn exact_hit() {
        let m = match_frame(&[det(0.0, 10.0, 0.9)], &[ann(0.0, 10.0)], 0.5);
        assert_eq!(m.counts(), Counts::new(1, 0, 0));
    }

    #[test]
    fn no_detections() {
        let m = match_frame::<f64>(&[], &[ann(0.0, 10.0), ann(50.0, 10.0)], 0.5);
        assert_eq!(m.counts(), Counts::new(0, 0, 2));
    }

    #[test]
    fn higher_confidence_wins_the_annotation() {
        // IoU 0.6 for the 0.9 detection, 0.7 for the 0.8 one
        let a = ann(0.0, 10.0);
        let d1 = det(0.0, 10.0 / 0.6, 0.9);
        let d2 = det(0.0, 10.0 / 0.7, 0.8);
        assert!((iou(&d1.bbox, &a.bbox) - 0.6).abs() < 1e-12);
        assert!((iou(&d2.bbox, &a.bbox) - 0.7).abs() < 1e-12);
        let m = match_frame(&[d2, d1], &[a], 0.5);
        assert_eq!(m.counts(), Counts::new(1, 1, 0));
        assert_eq!(m.true_positives[0].detection, 1);
        assert_eq!(m.false_positives, vec![0]);
    }

    #[test]
    fn picks_highest_iou_annotation() {
        let m = match_frame(&[det(2.0, 10.0, 0.9)], &[ann(0.0, 10.0), ann(1.0, 10.0)], 0.5);
        assert_eq!(m.true_positives[0].annotation, 1);
    }

    #[test]
    fn threshold_is_inclusive() {
        let a = ann(0.0, 10.0);
        let d = det(0.0, 20.0, 0.5);
        assert_eq!(match_frame(&[d], &[a], 0.5).counts(), Counts::new(1, 0, 0));
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn aggregate_two_sites() {
        let r = aggregate::<f64>(&[("A".into(), Counts::new(8, 2, 2)), ("B".into(), Counts::new(2, 2, 8))]).unwrap();
        assert!(close(r.micro.precision, 10.0 / 14.0));
        assert!(close(r.micro.recall, 0.5));
        let p = 10.0 / 14.0;
        assert!(close(r.micro.f1, 2.0 * p * 0.5 / (p + 0.5)));
        assert!(close(r.macro_avg.f1, (0.8 + 2.0 * 0.5 * 0.2 / 0.7) / 2.0));
        assert!(close(r.macro_avg.recall, 0.5));
    }

    #[test]
    fn single_site_micro_equals_macro() {
        let r = aggregate::<f64>(&[("A".into(), Counts::new(3, 1, 4))]).unwrap();
        assert_eq!(r.micro, r.macro_avg);
        assert_eq!(r.micro, r.sites[0].metrics);
    }

    #[test]
    fn empty_site_counts_as_zero() {
        let r = aggregate::<f64>(&[("A".into(), Counts::new(8, 2, 2)), ("E".into(), Counts::default())]).unwrap();
        assert_eq!(r.sites[1].metrics, Metrics { recall: 0.0, precision: 0.0, f1: 0.0 });
        assert!(close(r.macro_avg.f1, 0.4));
        assert!(aggregate::<f64>(&[]).is_err());
    }

    #[test]
    fn evaluate_groups_sites_and_computes_ap() {
        let frames = vec![
            FrameEval { site: "B".into(), detections: vec![det(0.0, 10.0, 0.9)], annotations: vec![ann(0.0, 10.0)] },
            FrameEval { site: "A".into(), detections: vec![det(50.0, 10.0, 0.8)], annotations: vec![ann(0.0, 10.0)] },
            FrameEval { site: "C".into(), detections: vec![det(50.0, 10.0, 0.8)], annotations: vec![] },
        ];
        let r = evaluate(&frames, 0.5, Interpolation::AllPoint).unwrap();
        let names: Vec<&str> = r.sites.iter().map(|s| s.site.as_str()).collect();
        assert_eq!(names, vec!["A", "B", "C"]);
        assert_eq!(r.sites[0].ap50, Some(0.0));
        assert_eq!(r.sites[1].ap50, Some(1.0));
        assert_eq!(r.sites[2].ap50, None);
        assert_eq!(r.macro_ap50, Some(0.5));
        assert_eq!(r.micro_counts, Counts::new(1, 2, 1));
        // pooled: TP at 0.9 then two FPs at 0.8 → recall 0.5 at precision 1
        assert!(close(r.micro_ap50.unwrap(), 0.5));
    }

    #[test]
    fn works_in_f32() {
        let r = aggregate::<f32>(&[("A".into(), Counts::new(8, 2, 2))]).unwrap();
        assert!((r.micro.f1 - 0.8).abs() < 1e-6);
    }
}
