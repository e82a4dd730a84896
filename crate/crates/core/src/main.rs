use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use persim::fusion::MetricId;
use persim::harness::{compare_paths, evaluate_database, load_manifest, write_scatter, EvaluateOptions, ScoreConvention};
use persim::stats::{FitOptions, LogisticVariant};
use persim::{PersimConfig, PersimError};

#[derive(Parser)]
#[command(name = "persim", version, about = "Perceptual similarity index for full-reference image quality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one distorted image against its reference.
    Compare {
        /// Reference image (PNG, BMP or JPEG).
        reference: PathBuf,
        /// Distorted image of the same size.
        distorted: PathBuf,
        /// Print scores as a JSON object.
        #[arg(long)]
        json: bool,
        /// TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Score an IQA database manifest and report correlation statistics.
    Evaluate {
        /// CSV manifest with header ref,dist,score,distortion,category.
        #[arg(long)]
        manifest: PathBuf,
        /// Comma-separated: persim, persim_sr, logsim, psnr, rmse.
        #[arg(long, default_value = "persim,logsim,psnr", value_delimiter = ',')]
        metrics: Vec<String>,
        /// Write the full report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write objective/mapped/subjective scatter data.
        #[arg(long)]
        scatter: Option<PathBuf>,
        /// Metric for the scatter file; defaults to the first listed metric.
        #[arg(long)]
        scatter_metric: Option<String>,
        /// Restrict the scatter file to one category.
        #[arg(long)]
        scatter_category: Option<String>,
        /// TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Score convention of the manifest: mos or dmos.
        #[arg(long, default_value = "mos")]
        convention: String,
        /// Logistic form: standard or literal.
        #[arg(long, default_value = "standard")]
        logistic: String,
        /// Print the statistics as CSV instead of a table.
        #[arg(long)]
        csv: bool,
        /// Print the full report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Print the default configuration as TOML.
    DefaultConfig,
}

fn load_config(path: Option<&Path>) -> Result<PersimConfig, PersimError> {
    path.map_or_else(|| Ok(PersimConfig::default()), PersimConfig::load)
}

fn write_file(path: &Path, text: &str) -> Result<(), PersimError> {
    std::fs::write(path, text).map_err(|e| PersimError::Io { path: path.to_path_buf(), source: e })
}

fn run(cli: Cli) -> Result<(), PersimError> {
    match cli.command {
        Command::Compare { reference, distorted, json, config } => {
            let cfg = load_config(config.as_deref())?;
            let record = compare_paths(&reference, &distorted, &cfg)?;
            if json {
                emit(&(serde_json::to_string(&record).expect("record serializes") + "\n"));
            } else {
                emit(&record.to_text());
            }
        }
        Command::Evaluate {
            manifest,
            metrics,
            out,
            scatter,
            scatter_metric,
            scatter_category,
            config,
            jobs,
            convention,
            logistic,
            csv,
            json,
        } => {
            let cfg = load_config(config.as_deref())?;
            let metrics = metrics.iter().map(|m| m.parse()).collect::<Result<Vec<MetricId>, _>>()?;
            let variant = match logistic.as_str() {
                "standard" => LogisticVariant::Standard,
                "literal" => LogisticVariant::Literal,
                other => return Err(PersimError::InvalidParameter(format!("unknown logistic form '{other}'"))),
            };
            let convention: ScoreConvention = convention.parse()?;
            let manifest = load_manifest(&manifest, convention)?;
            let options = EvaluateOptions {
                metrics: metrics.clone(),
                jobs,
                fit: FitOptions { variant, ..FitOptions::default() },
                ..EvaluateOptions::default()
            };
            let report = evaluate_database(&manifest, &options, &cfg)?;
            if let Some(path) = &out {
                write_file(path, &report.to_json())?;
            }
            if let Some(path) = &scatter {
                let metric = match &scatter_metric {
                    Some(m) => m.parse()?,
                    None => metrics[0],
                };
                let summary = write_scatter(&report, metric, scatter_category.as_deref(), path)?;
                if let Some(w) = summary.warning {
                    eprintln!("warning: {w}");
                }
            }
            if json {
                emit(&(report.to_json() + "\n"));
            } else if csv {
                emit(&report.to_csv());
            } else {
                emit(&report.to_table());
            }
        }
        Command::DefaultConfig => emit(&PersimConfig::default().to_toml_string()),
    }
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            std::process::exit(2);
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
