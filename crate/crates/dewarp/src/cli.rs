use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dewarp_core::metrics::EvalOptions;
use serde::Serialize;

use crate::batch::{load_jobs, run_batch, worker_count};
use crate::config::{OutputFormat, PipelineConfig};
use crate::debug::render_dumps;
use crate::error::{exit, CliError, Result};
use crate::eval::{evaluate_pairs, load_pairs, write_report};
use crate::formats::{GridDump, OutlineDump};
use crate::io::{read_image, write_atomic, write_image};
use crate::runner::{dewarp_one, Job};

/// Rectify camera-captured document images from a document probability
/// mask.
///
/// Exit codes: 0 success, 1 internal error, 2 bad arguments or config,
/// 3 missing or unreadable input, 4 degenerate mask, 5 grid failure,
/// 6 partial batch success.
#[derive(Debug, Parser)]
#[command(name = "dewarp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dewarp one image.
    Run(RunArgs),
    /// Dewarp every entry of a JSON manifest of {image, mask, output}.
    Batch(BatchArgs),
    /// Score dewarped images (and recognized text) against references.
    Eval(EvalArgs),
    /// Run one image and write every intermediate artifact to a directory.
    Debug(DebugArgs),
    /// Draw a dumped grid (and outline) over an image.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set grid_rows=31`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let base = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        let mut cfg = base.with_overrides(&self.overrides)?;
        if let Some(f) = self.format {
            cfg.output_format = f;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub image: PathBuf,
    /// 8-bit grayscale probability mask of the image's size.
    #[arg(long)]
    pub mask: PathBuf,
    /// Defaults to `<image stem>_dewarped.<ext>` beside the image.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub debug_dir: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Where to write the run manifest JSON; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Concurrent images; overrides DEWARP_WORKERS.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON array of {dewarped, reference, hyp_text, ref_text}.
    #[arg(long)]
    pub pairs: PathBuf,
    /// JSON-lines report.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Fail pairs whose sizes differ instead of resizing to the reference.
    #[arg(long)]
    pub no_resize: bool,
}

#[derive(Debug, Args)]
pub struct DebugArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub mask: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long)]
    pub outline: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T> {
    if !path.is_file() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(path, e.to_string()))
}

fn run_cmd(args: &RunArgs) -> Result<u8> {
    let cfg = args.config.resolve()?;
    let job = Job {
        output: args.output.clone().unwrap_or_else(|| Job::default_output(&args.image, &cfg)),
        image: args.image.clone(),
        mask: args.mask.clone(),
    };
    let record = dewarp_one(&job, &cfg, args.debug_dir.as_deref())?;
    print_json(&record)?;
    Ok(exit::SUCCESS)
}

fn batch_cmd(args: &BatchArgs) -> Result<u8> {
    let cfg = args.config.resolve()?;
    let workers = worker_count(args.workers)?;
    let jobs = load_jobs(&args.manifest)?;
    let manifest = run_batch(&jobs, &cfg, workers);
    match &args.report {
        Some(p) => write_atomic(p, |w| serde_json::to_writer_pretty(w, &manifest).map_err(std::io::Error::other))?,
        None => print_json(&manifest)?,
    }
    for f in &manifest.failures {
        eprintln!("dewarp: {}: {}", f.image.display(), f.error);
    }
    Ok(manifest.exit_code())
}

fn eval_cmd(args: &EvalArgs) -> Result<u8> {
    let workers = worker_count(args.workers)?;
    let pairs = load_pairs(&args.pairs)?;
    let options = EvalOptions {
        resize_to_reference: !args.no_resize,
    };
    let (reports, agg) = evaluate_pairs(&pairs, options, workers);
    write_report(&args.out, &reports, &agg)?;
    for r in reports.iter().filter(|r| !r.is_ok()) {
        eprintln!("dewarp: pair {}: {}", r.index, r.error.as_deref().unwrap_or_default());
    }
    Ok(if agg.excluded > 0 && agg.evaluated > 0 { exit::PARTIAL } else { exit::SUCCESS })
}

fn debug_cmd(args: &DebugArgs) -> Result<u8> {
    let cfg = args.config.resolve()?;
    let job = Job {
        image: args.image.clone(),
        mask: args.mask.clone(),
        output: args.out_dir.join(format!("dewarped.{}", cfg.output_format.extension())),
    };
    let record = dewarp_one(&job, &cfg, Some(&args.out_dir))?;
    print_json(&record)?;
    Ok(exit::SUCCESS)
}

fn render_cmd(args: &RenderArgs) -> Result<u8> {
    let image = read_image(&args.image)?;
    let grid: GridDump = read_json(&args.grid)?;
    let outline: Option<OutlineDump> = args.outline.as_deref().map(read_json).transpose()?;
    write_image(&args.out, &render_dumps(&image, outline.as_ref(), &grid), OutputFormat::Png)?;
    Ok(exit::SUCCESS)
}

pub fn execute(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Run(a) => run_cmd(a),
        Command::Batch(a) => batch_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Debug(a) => debug_cmd(a),
        Command::Render(a) => render_cmd(a),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::BAD_ARGS } else { exit::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dewarp: {e}");
            e.exit_code()
        }
    }
}
