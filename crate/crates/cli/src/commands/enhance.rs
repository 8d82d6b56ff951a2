use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use anyhow::Context;
use mie_core::imageio::OutputFormat;
use mie_core::ingest::{self, SequenceManifest};
use mie_core::mie::{self, EdgePolicy, FileSink, FileSource, FrameSink, KernelKind, MieError, SequenceReport};
use mie_core::{EnhancedFrame, FrameRecord, MieConfig};
use serde::Serialize;

use super::config_error;
use crate::cli::{EdgeArg, EnhanceArgs, FormatArg, KernelArg};
use crate::config::FileConfig;
use crate::input;

/// Remembers which frames reached disk.
struct RecordingSink {
    inner: FileSink,
    written: Mutex<Vec<FrameRecord>>,
}

impl FrameSink for RecordingSink {
    fn write(&self, record: &FrameRecord, frame: &EnhancedFrame) -> Result<(), MieError> {
        self.inner.write(record, frame)?;
        let out = FrameRecord::new(
            record.site_id.clone(),
            record.timestamp,
            record.sequence_index,
            self.inner.path_for(record),
        );
        self.written.lock().unwrap_or_else(|p| p.into_inner()).push(out);
        Ok(())
    }
}

#[derive(Serialize)]
struct SiteRun {
    site: String,
    #[serde(flatten)]
    report: SequenceReport,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'static str,
    workers: usize,
    elapsed_secs: f64,
    written: usize,
    failures: usize,
    config: &'a MieConfig,
    skipped_inputs: &'a [ingest::SkippedFile],
    sites: Vec<SiteRun>,
}

pub(super) fn mie_config(args: &EnhanceArgs, file: &FileConfig) -> anyhow::Result<MieConfig> {
    let mut cfg = file.mie.clone();
    if let Some(e) = args.edge {
        cfg.edge_policy = match e {
            EdgeArg::Replicate => EdgePolicy::Replicate,
            EdgeArg::Skip => EdgePolicy::Skip,
        };
    }
    if let Some(k) = args.kernel {
        cfg.kernel = match k {
            KernelArg::Binomial => KernelKind::Binomial,
            KernelArg::Gaussian => KernelKind::Gaussian,
        };
    }
    if let Some(k) = args.kernel_size {
        cfg.blur_kernel_size = k;
    }
    if let Some(s) = args.sigma {
        cfg.blur_sigma = s;
    }
    cfg.validate().map_err(config_error)?;
    Ok(cfg)
}

pub fn run(args: &EnhanceArgs, file: &FileConfig, workers: usize) -> anyhow::Result<()> {
    let cfg = mie_config(args, file)?;
    let frames = input::load(&args.frames)?;
    let format = match args.format {
        FormatArg::Png => OutputFormat::Png,
        FormatArg::Jpeg => OutputFormat::Jpeg { quality: args.quality },
    };
    input::create_dir(&args.out)?;
    let multi = frames.manifests.len() > 1;
    let started = Instant::now();
    let mut sites = Vec::new();
    let mut outputs = Vec::new();
    for m in &frames.manifests {
        let dir = input::site_dir(&args.out, &m.site_id, multi);
        input::create_dir(&dir)?;
        let sink = RecordingSink {
            inner: FileSink::new(&dir, format),
            written: Mutex::new(Vec::new()),
        };
        let report = mie::enhance_sequence(&m.frames, m.nominal_interval_secs, &cfg, &FileSource, &sink, workers)
            .with_context(|| format!("enhancing site {}", m.site_id))?;
        for f in &report.failures {
            log::warn!("frame {} ({}): {}", f.sequence_index, f.path, f.message);
        }
        log::info!("{}: {} of {} frames written", m.site_id, report.written, report.input_frames);
        let mut written = sink.written.into_inner().unwrap_or_else(|p| p.into_inner());
        written.sort_by_key(|r| r.sequence_index);
        outputs.push(SequenceManifest {
            frames: written.into_iter().map(|r| relative(r, &args.out)).collect(),
            ..m.clone()
        });
        sites.push(SiteRun {
            site: m.site_id.clone(),
            report,
        });
    }
    ingest::write_manifest_csv(&args.out.join("manifest.csv"), &outputs)?;

    let run = RunReport {
        command: "enhance",
        workers,
        elapsed_secs: started.elapsed().as_secs_f64(),
        written: sites.iter().map(|s| s.report.written).sum(),
        failures: sites.iter().map(|s| s.report.failures.len()).sum(),
        config: &cfg,
        skipped_inputs: &frames.skipped,
        sites,
    };
    let json = serde_json::to_string_pretty(&run)?;
    let path = args.report.clone().unwrap_or_else(|| args.out.join("run_report.json"));
    std::fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    println!(
        "{}",
        serde_json::json!({ "status": "ok", "written": run.written, "failures": run.failures, "report": path })
    );
    Ok(())
}

fn relative(r: FrameRecord, base: &Path) -> FrameRecord {
    let path = r.path.strip_prefix(base).map(Path::to_path_buf).unwrap_or_else(|_| r.path.clone());
    FrameRecord { path, ..r }
}
