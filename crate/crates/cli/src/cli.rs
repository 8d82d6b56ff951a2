use std::path::PathBuf;

use chrono::{DateTime, Utc};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mie", version, about = "Motion-informed enhancement of insect time-lapse sequences")]
pub struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "MIE_WORKERS")]
    pub workers: Option<usize>,
    /// TOML file with [mie], [detector], [abundance] and [synth] sections.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write MIE-enhanced frames for a sequence.
    Enhance(EnhanceArgs),
    /// Run the baseline detector on the red channel of each frame.
    Detect(DetectArgs),
    /// Score detection files against annotation files.
    Eval(EvalArgs),
    /// Suppress repeated detections and bin counts over time.
    Abundance(AbundanceArgs),
    /// Render a synthetic dataset with ground truth.
    Synth(SynthArgs),
    /// Per-site image and insect counts.
    Stats(StatsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enhance(_) => "enhance",
            Command::Detect(_) => "detect",
            Command::Eval(_) => "eval",
            Command::Abundance(_) => "abundance",
            Command::Synth(_) => "synth",
            Command::Stats(_) => "stats",
        }
    }
}

/// Where the frames come from: a directory scanned with a filename
/// template, or a manifest CSV.
#[derive(Debug, Args)]
pub struct FramesArgs {
    #[arg(long = "in", value_name = "DIR", required_unless_present = "manifest", conflicts_with = "manifest")]
    pub input: Option<PathBuf>,
    /// CSV with columns path,site,view,plant,timestamp.
    #[arg(long, value_name = "CSV")]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value = "{*}.{ext}")]
    pub template: String,
    /// Site id for a scanned directory.
    #[arg(long, default_value = "site")]
    pub site: String,
    /// Nominal seconds between frames.
    #[arg(long, default_value_t = 30)]
    pub interval: i64,
    /// Time of the first frame when names carry no timestamp (RFC 3339).
    #[arg(long)]
    pub start: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EdgeArg {
    Replicate,
    Skip,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KernelArg {
    Binomial,
    Gaussian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Png,
    Jpeg,
}

#[derive(Debug, Args)]
pub struct EnhanceArgs {
    #[command(flatten)]
    pub frames: FramesArgs,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub edge: Option<EdgeArg>,
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Blur kernel size (odd).
    #[arg(long)]
    pub kernel_size: Option<usize>,
    /// Sigma of the Gaussian kernel.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum, default_value = "png")]
    pub format: FormatArg,
    #[arg(long, default_value_t = 95)]
    pub quality: u8,
    /// Run report path; defaults to <out>/run_report.json.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub frames: FramesArgs,
    /// Directory for one detection file per frame.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Binarization level 1-254, or "otsu".
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub open_radius: Option<usize>,
    #[arg(long)]
    pub min_area: Option<usize>,
    #[arg(long)]
    pub max_area: Option<usize>,
    #[arg(long)]
    pub pad: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InterpArg {
    AllPoint,
    ElevenPoint,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub frames: FramesArgs,
    /// Detection files (`<stem>.txt`, optionally under `<site>/`).
    #[arg(long, value_name = "DIR")]
    pub det: PathBuf,
    /// Annotation files, same layout as --det.
    #[arg(long, value_name = "DIR")]
    pub ann: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub iou: f64,
    #[arg(long, value_enum, default_value = "all-point")]
    pub interp: InterpArg,
    /// CSV report path; printed to stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AnchorArg {
    Kept,
    Any,
}

#[derive(Debug, Args)]
pub struct AbundanceArgs {
    #[command(flatten)]
    pub frames: FramesArgs,
    #[arg(long, value_name = "DIR")]
    pub det: PathBuf,
    /// Suppression window in seconds.
    #[arg(long)]
    pub window: Option<i64>,
    /// Same-position radius in pixels.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Bin length in seconds.
    #[arg(long)]
    pub bin: Option<i64>,
    #[arg(long, value_enum)]
    pub anchor: Option<AnchorArg>,
    /// Series CSV path; printed to stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Also write the kept detections under this directory.
    #[arg(long, value_name = "DIR")]
    pub kept: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub frames: FramesArgs,
    #[arg(long, value_name = "DIR")]
    pub ann: PathBuf,
    /// CSV path; printed to stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
