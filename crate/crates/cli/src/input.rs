use std::path::{Path, PathBuf};

use anyhow::Context;
use mie_core::imageio;
use mie_core::ingest::{self, FilenameTemplate, ScanOptions, SequenceManifest, SkippedFile};

use crate::cli::FramesArgs;
use crate::UsageError;

/// Frame size assumed when no frame can be probed. Normalized boxes make
/// IoU independent of it.
const NOMINAL_DIMS: (usize, usize) = (1920, 1080);

pub struct Frames {
    pub manifests: Vec<SequenceManifest>,
    pub skipped: Vec<SkippedFile>,
}

pub fn load(args: &FramesArgs) -> anyhow::Result<Frames> {
    if args.interval <= 0 {
        return Err(UsageError(format!("--interval must be positive, got {}", args.interval)).into());
    }
    if let Some(csv) = &args.manifest {
        if !csv.is_file() {
            return Err(UsageError(format!("manifest {} not found", csv.display())).into());
        }
        let manifests = ingest::read_manifest_csv(csv, args.interval)?;
        return Ok(Frames { manifests, skipped: Vec::new() });
    }
    let dir = args.input.as_deref().expect("clap requires --in or --manifest");
    if !dir.is_dir() {
        return Err(UsageError(format!("input directory {} not found", dir.display())).into());
    }
    let template = FilenameTemplate::parse(&args.template).map_err(UsageError)?;
    let mut opts = ScanOptions {
        site_id: args.site.clone(),
        nominal_interval_secs: args.interval,
        ..Default::default()
    };
    if let Some(start) = args.start {
        opts.start = start;
    }
    let out = ingest::scan_sequence(dir, &template, &opts)?;
    for s in &out.skipped {
        log::warn!("skipped {}: {}", s.path.display(), s.reason);
    }
    Ok(Frames {
        manifests: vec![out.manifest],
        skipped: out.skipped,
    })
}

/// Output directory for one site: nested only when several sites share `out`.
pub fn site_dir(out: &Path, site: &str, multi: bool) -> PathBuf {
    if multi {
        out.join(site)
    } else {
        out.to_path_buf()
    }
}

/// `<dir>/<site>/<stem>.txt` when present, else `<dir>/<stem>.txt`.
pub fn sidecar(dir: &Path, site: &str, stem: &str) -> PathBuf {
    let nested = dir.join(site).join(format!("{stem}.txt"));
    if nested.is_file() {
        nested
    } else {
        dir.join(format!("{stem}.txt"))
    }
}

pub fn require_dir(dir: &Path, what: &str) -> anyhow::Result<()> {
    if dir.is_dir() {
        Ok(())
    } else {
        Err(UsageError(format!("{what} directory {} not found", dir.display())).into())
    }
}

pub fn create_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Size of the first readable frame, or the nominal size.
pub fn frame_dims(frames: &Frames) -> (usize, usize) {
    let first = frames.manifests.iter().flat_map(|m| m.frames.first()).next();
    match first.map(|f| imageio::dimensions(&f.path)) {
        Some(Ok(d)) => d,
        _ => {
            log::info!("no readable frame, assuming {}x{}", NOMINAL_DIMS.0, NOMINAL_DIMS.1);
            NOMINAL_DIMS
        }
    }
}
