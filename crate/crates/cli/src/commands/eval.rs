use std::sync::Arc;

use mie_core::eval::{self, FrameEval, Interpolation};
use mie_core::ingest;

use super::{config_error, with_output};
use crate::cli::{EvalArgs, InterpArg};
use crate::input;

pub fn run(args: &EvalArgs) -> anyhow::Result<()> {
    if !(args.iou > 0.0 && args.iou <= 1.0) {
        return Err(config_error(format!("--iou {} outside (0, 1]", args.iou)));
    }
    input::require_dir(&args.det, "detection")?;
    input::require_dir(&args.ann, "annotation")?;
    let frames = input::load(&args.frames)?;
    let (w, h) = input::frame_dims(&frames);
    let mut evals = Vec::new();
    for m in &frames.manifests {
        for rec in &m.frames {
            let r = Arc::new(rec.clone());
            let stem = rec.stem();
            let det = input::sidecar(&args.det, &m.site_id, &stem);
            let ann = input::sidecar(&args.ann, &m.site_id, &stem);
            let detections = if det.is_file() { ingest::read_detections(&det, &r, w, h)? } else { Vec::new() };
            let annotations = if ann.is_file() { ingest::read_annotations(&ann, &r, w, h)? } else { Vec::new() };
            evals.push(FrameEval {
                site: m.site_id.clone(),
                detections,
                annotations,
            });
        }
    }
    let interp = match args.interp {
        InterpArg::AllPoint => Interpolation::AllPoint,
        InterpArg::ElevenPoint => Interpolation::ElevenPoint,
    };
    let report = eval::evaluate::<f64>(&evals, args.iou, interp)?;
    with_output(args.out.as_deref(), |w| Ok(eval::report_to_csv(&report, w)?))?;
    if args.out.is_some() {
        print!("{}", eval::report_to_text(&report));
    }
    Ok(())
}
