//! `railgauge` — evaluate rail perception logs against the obstacle
//! detection submetric, braking kinematics and safety gates.

mod commands;
mod config;
mod plot;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{parse_mode, MetricOverrides};

#[derive(Parser)]
#[command(
    name = "railgauge",
    version,
    about = "Obstacle-detection performance curves and safety gates for rail perception logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for internal parallelism (0 = automatic). Results
    /// are identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = "railgauge-out")]
    out_dir: PathBuf,
    /// Ignore unknown fields in input files (with warnings) instead of
    /// rejecting them.
    #[arg(long, global = true)]
    lenient: bool,
}

#[derive(Args, Clone, Copy, Default)]
struct MetricFlags {
    /// X percentage for the detection-distance quantile, in (0,100].
    #[arg(long)]
    x: Option<f64>,
    /// Maximum false-positive emergency brakings per hour.
    #[arg(long)]
    fp_budget_braking: Option<f64>,
    /// Maximum false-positive horn soundings per hour.
    #[arg(long)]
    fp_budget_horn: Option<f64>,
    /// Alarm merge window in seconds.
    #[arg(long)]
    merge_window: Option<f64>,
    /// Consecutive frames required at or above the threshold.
    #[arg(long)]
    persistence: Option<u32>,
}

impl MetricFlags {
    fn overrides(&self) -> MetricOverrides {
        MetricOverrides {
            x_percent: self.x,
            fp_budget_braking: self.fp_budget_braking,
            fp_budget_horn: self.fp_budget_horn,
            merge_window_s: self.merge_window,
            persistence: self.persistence,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the performance curve for a log, select operating points and
    /// check them against the minima.
    Eval {
        /// Evaluation log (line-delimited records).
        #[arg(long)]
        log: PathBuf,
        /// Run configuration (TOML).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Compare two systems' curves under the same minima.
    Compare {
        #[arg(long)]
        log_a: PathBuf,
        #[arg(long)]
        log_b: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Separate configuration for system B (X must match).
        #[arg(long)]
        config_b: Option<PathBuf>,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Hourly fatality rates, design-goal check and human-reference
    /// comparison at the braking operating point.
    Risk {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Generate a synthetic log from the configured detector model.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (default: <out-dir>/simulated.jsonl).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate submission records against the submetric constraints.
    Validate {
        /// Submission file, one record per line.
        #[arg(long)]
        submissions: PathBuf,
    },
}

fn run(cli: &Cli) -> Result<i32> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    let mode = parse_mode(cli.lenient);
    match &cli.command {
        Command::Eval { log, config, metric } => {
            commands::cmd_eval(log, config, &metric.overrides(), mode, &cli.out_dir)
        }
        Command::Compare {
            log_a,
            log_b,
            config,
            config_b,
            metric,
        } => commands::cmd_compare(
            log_a,
            log_b,
            config,
            config_b.as_deref(),
            &metric.overrides(),
            mode,
            &cli.out_dir,
        ),
        Command::Risk { log, config, metric } => {
            commands::cmd_risk(log, config, &metric.overrides(), mode, &cli.out_dir)
        }
        Command::Simulate { config, seed, out } => {
            commands::cmd_simulate(config, *seed, out.as_deref(), &cli.out_dir)
        }
        Command::Validate { submissions } => commands::cmd_validate(submissions, mode),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
