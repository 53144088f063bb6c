//! `richclub` — rich-club analysis of weighted temporal flow networks.
//!
//! Subcommands: `scan` (grid scan with null-model normalization),
//! `timeseries` (per-timestamp coefficient vs. flow sums with regression),
//! `synth` (planted-club generator), `export-geo` (GeoJSON membership and
//! flow layers), and `aggregate` (time-aggregated graph dump).
//!
//! Exit codes: 0 success, 2 input parse errors, 3 configuration errors,
//! 4 missing geometry.

mod commands;
mod config;
mod geojson;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{ExportGeoArgs, TimeseriesArgs};
use config::{parse_list, ConfigFile, ScanOverrides};
use geojson::MissingGeometry;
use richclub::{Error, PlantedSpec, WeightLaw};

#[derive(Parser)]
#[command(
    name = "richclub",
    version,
    about = "Rich-club effects in weighted temporal networks"
)]
struct Cli {
    /// Cap the scan worker thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for output files.
    #[arg(long, global = true, default_value = "richclub-out")]
    output_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScanFlags {
    /// Flow CSV: timestamp,origin,destination,weight.
    #[arg(long)]
    input: PathBuf,
    /// TOML config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// wtrc | ttrc | trc | static-wrc | static-toporc | mixed.
    #[arg(long)]
    metric: Option<String>,
    /// temporal-edge-count | aggregate-degree.
    #[arg(long)]
    richness: Option<String>,
    /// inclusive | strict.
    #[arg(long)]
    threshold_mode: Option<String>,
    /// Number of evenly spaced richness thresholds.
    #[arg(long)]
    k_count: Option<usize>,
    /// Number of evenly spaced durations.
    #[arg(long)]
    delta_count: Option<usize>,
    /// Explicit comma-separated thresholds (overrides --k-count).
    #[arg(long)]
    k_list: Option<String>,
    /// Explicit comma-separated durations (overrides --delta-count).
    #[arg(long)]
    delta_list: Option<String>,
    /// Endpoint of the generated duration grid.
    #[arg(long)]
    delta_max: Option<usize>,
    /// Null models per cell.
    #[arg(long)]
    nulls: Option<usize>,
    /// Comma-separated null recipe steps, e.g. weight-decorrelate,sequence-shuffle.
    #[arg(long)]
    recipe: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also render an SVG heatmap.
    #[arg(long)]
    svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Grid scan over richness thresholds and durations.
    Scan(ScanFlags),
    /// Normalized coefficient at every window start, with flow regression.
    Timeseries {
        #[arg(long)]
        input: PathBuf,
        /// Richness threshold defining the rich set.
        #[arg(long)]
        k: f64,
        /// Window duration in snapshots.
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value = "wtrc")]
        metric: String,
        #[arg(long)]
        richness: Option<String>,
        #[arg(long)]
        threshold_mode: Option<String>,
        #[arg(long, default_value_t = 10)]
        nulls: usize,
        #[arg(long)]
        recipe: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit separate pre/post regressions split at this window index.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Generate a synthetic planted-club instance.
    Synth {
        #[arg(long, default_value_t = 60)]
        nodes: usize,
        #[arg(long, default_value_t = 52)]
        snapshots: usize,
        #[arg(long, default_value_t = 8)]
        club_size: usize,
        /// Multiplier on club edge weights during the window (>= 1).
        #[arg(long, default_value_t = 10.0)]
        club_scale: f64,
        /// Inclusive 0-based window, e.g. 10,31.
        #[arg(long, default_value = "10,31")]
        club_window: String,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// lognormal:mu,sigma or uniform:low,high.
        #[arg(long, default_value = "lognormal:0,1")]
        weight_law: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// GeoJSON Points and LineStrings for one scan cell.
    ExportGeo {
        #[arg(long)]
        input: PathBuf,
        /// result.json from a scan run.
        #[arg(long)]
        result: PathBuf,
        /// Node centroid CSV: node,lon,lat.
        #[arg(long)]
        geometry: PathBuf,
        /// Threshold of the cell (defaults to the argmax cell).
        #[arg(long)]
        k: Option<f64>,
        /// Duration of the cell.
        #[arg(long)]
        delta: Option<usize>,
        /// Output file (defaults to <output-dir>/richclub.geojson).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dump the time-aggregated graph as CSV.
    Aggregate {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<MissingGeometry>().is_some() {
        return 4;
    }
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<Error>() {
            return match core {
                Error::Config(_) | Error::WeightedInput => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    let output_dir = cli.output_dir.clone();
    match cli.command {
        Command::Scan(flags) => {
            let file = match &flags.config {
                Some(path) => ConfigFile::load(path)?,
                None => ConfigFile::default(),
            };
            let overrides = ScanOverrides {
                metric: flags.metric.clone(),
                richness: flags.richness.clone(),
                threshold_mode: flags.threshold_mode.clone(),
                k_count: flags.k_count,
                delta_count: flags.delta_count,
                k_list: flags
                    .k_list
                    .as_deref()
                    .map(|s| parse_list::<f64>(s, "threshold"))
                    .transpose()?,
                delta_list: flags
                    .delta_list
                    .as_deref()
                    .map(|s| parse_list::<usize>(s, "delta"))
                    .transpose()?,
                delta_max: flags.delta_max,
                nulls: flags.nulls,
                recipe: flags
                    .recipe
                    .as_deref()
                    .map(|s| s.split(',').map(|p| p.trim().to_string()).collect()),
                seed: flags.seed,
            };
            let config = config::resolve_scan_config(&overrides, &file)?;
            let threads = cli.threads.or(file.threads);
            with_pool(threads, || {
                commands::run_scan(&flags.input, &output_dir, &config, flags.svg).map(|_| ())
            })
        }
        Command::Timeseries {
            input,
            k,
            delta,
            metric,
            richness,
            threshold_mode,
            nulls,
            recipe,
            seed,
            split,
        } => {
            let args = TimeseriesArgs {
                threshold: k,
                delta,
                metric,
                richness,
                threshold_mode,
                nulls,
                recipe: recipe
                    .as_deref()
                    .map(|s| s.split(',').map(|p| p.trim().to_string()).collect()),
                seed,
                split,
            };
            with_pool(cli.threads, || {
                commands::run_timeseries(&input, &output_dir, &args).map(|_| ())
            })
        }
        Command::Synth {
            nodes,
            snapshots,
            club_size,
            club_scale,
            club_window,
            density,
            weight_law,
            seed,
        } => {
            let window: Vec<usize> = parse_list(&club_window, "club window")?;
            if window.len() != 2 {
                return Err(Error::Config(format!(
                    "club window needs two indices, got {club_window:?}"
                ))
                .into());
            }
            let spec = PlantedSpec {
                nodes,
                snapshots,
                club_size,
                club_weight_scale: club_scale,
                club_window: (window[0], window[1]),
                background_density: density,
                background_weight_law: parse_weight_law_flag(&weight_law)?,
                seed,
            };
            commands::run_synth(&output_dir, &spec).map(|_| ())
        }
        Command::ExportGeo { input, result, geometry, k, delta, output } => {
            let args = ExportGeoArgs { result, geometry, k, delta, output };
            commands::run_export_geo(&input, &output_dir, &args).map(|_| ())
        }
        Command::Aggregate { input } => commands::run_aggregate(&input, &output_dir),
    }
}

fn parse_weight_law_flag(text: &str) -> Result<WeightLaw> {
    commands::parse_weight_law(text)
}

/// Run inside a bounded rayon pool when a thread cap was requested.
fn with_pool(threads: Option<usize>, body: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(body)
        }
        None => body(),
    }
}
