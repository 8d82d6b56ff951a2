mod abundance;
mod detect;
mod enhance;
mod eval;
mod stats;
mod synth;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;

use crate::cli::{Cli, Command};
use crate::config;

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let file = config::load(cli.config.as_deref())?;
    let workers = cli.workers.or(file.workers).unwrap_or(0);
    match &cli.command {
        Command::Enhance(a) => enhance::run(a, &file, workers),
        Command::Detect(a) => detect::run(a, &file, workers),
        Command::Eval(a) => eval::run(a),
        Command::Abundance(a) => abundance::run(a, &file),
        Command::Synth(a) => synth::run(a, &file),
        Command::Stats(a) => stats::run(a),
    }
}

fn pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")
}

/// Runs `f` on a buffered file, or on stdout when `path` is `None`.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            f(&mut w)?;
            w.flush().with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush().context("writing stdout")
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> anyhow::Error {
    crate::UsageError(e.to_string()).into()
}
