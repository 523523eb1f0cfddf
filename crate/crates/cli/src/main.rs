//! `salobj`: batch saliency maps, evaluation, weight sweeps, object location
//! statistics and significance tests.

mod args;
mod distribution;
mod evaluate;
mod manifest;
mod saliency;
mod significance;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{ConfigArgs, DatasetArgs};

#[derive(Debug, Parser)]
#[command(
    name = "salobj",
    version,
    about = "Salient object detection with explicit center bias"
)]
#[command(after_help = "Exit status: 0 success, 1 fatal error, 2 completed with warnings.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one 8-bit PNG saliency map per image, named <stem>_<algorithm>.png,
    /// plus manifest.json with the configuration and its hash
    Saliency {
        /// Directory of input images
        #[arg(long)]
        images: PathBuf,
        /// Only compute maps for images that have a mask here
        #[arg(long)]
        masks: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write into a directory holding maps of a different configuration
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Score saliency maps against masks
    #[command(after_help = "Writes report.json (aggregate and per-image measures) and \
curves.csv with columns threshold,precision,recall,fpr,tpr (macro-averaged per threshold). \
With --baseline, relative.json holds 100 * measure / baseline measure.")]
    Evaluate {
        /// Directory written by `salobj saliency`
        #[arg(long)]
        maps: PathBuf,
        #[arg(long)]
        masks: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// report.json of a baseline run for relative percentages
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Evaluate maps without a manifest or with a different configuration hash
        #[arg(long)]
        force: bool,
        /// Precision weight of the F-measure
        #[arg(long, default_value_t = salobj::evaluation::DEFAULT_BETA2)]
        beta2: f64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Evaluate a center-biased algorithm over a grid of prior weights
    #[command(after_help = "Writes sweep.csv with columns w_c,f1,f_beta,auc_pr,auc_roc,hit_rate \
and sweep.json with the best weight per measure.")]
    SweepWeight {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[arg(long)]
        out: PathBuf,
        /// Grid spacing of w_C, in (0, 0.5]
        #[arg(long, default_value_t = 0.025)]
        step: f64,
        #[arg(long, default_value_t = salobj::evaluation::DEFAULT_BETA2)]
        beta2: f64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Location statistics of the ground-truth objects
    #[command(after_help = "Writes centroids.csv (stem,x,y,theta,r,theta_signed,r_signed), \
mean_mask.png, qq_angle.csv, qq_radius.csv and qq_signed_radius.csv (theoretical,sample), \
and distribution.json with mean, covariance, PPCC values and test decisions.")]
    AnalyzeDistribution {
        #[arg(long)]
        masks: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Side length of the mean-mask image
        #[arg(long, default_value_t = 256)]
        mean_mask_size: usize,
        /// Significance level (PPCC tables exist for 0.05 and 0.01)
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// t-tests between the per-image scores of two evaluation reports
    #[command(
        after_help = "Pass the center-biased run as A and its baseline as B. For F1, F_beta, \
AUC-PR and AUC-ROC the output JSON holds the equal-means test and the one-sided test of \
mean(A) <= mean(B), each in paired and Welch form."
    )]
    Significance {
        /// report.json of run A
        a: PathBuf,
        /// report.json of run B
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Tabulate the summed raw spatial weight each grid cell receives
    #[command(after_help = "Writes one comma-separated line per grid row; grid positions are normalized to [0,1]^2.")]
    WeightField {
        #[arg(long, default_value_t = 32)]
        grid_w: usize,
        #[arg(long, default_value_t = 32)]
        grid_h: usize,
        #[arg(long, default_value_t = salobj::pipeline::DEFAULT_SIGMA_S2)]
        sigma_s2: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// How a command finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Warnings,
}

impl Outcome {
    pub fn from_warnings(count: usize) -> Self {
        if count == 0 {
            Outcome::Success
        } else {
            Outcome::Warnings
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Saliency {
            images,
            masks,
            out,
            force,
            config,
        } => saliency::run(&images, masks.as_deref(), &out, force, &config),
        Command::Evaluate {
            maps,
            masks,
            out,
            baseline,
            force,
            beta2,
            config,
        } => evaluate::run(
            &evaluate::Options {
                maps,
                masks,
                out,
                baseline,
                force,
                beta2,
            },
            &config,
        ),
        Command::SweepWeight {
            dataset,
            out,
            step,
            beta2,
            config,
        } => sweep::run(&dataset, &out, step, beta2, &config),
        Command::AnalyzeDistribution {
            masks,
            out,
            mean_mask_size,
            alpha,
        } => distribution::run(&masks, &out, mean_mask_size, alpha),
        Command::Significance { a, b, out, alpha } => significance::run(&a, &b, &out, alpha),
        Command::WeightField {
            grid_w,
            grid_h,
            sigma_s2,
            out,
        } => {
            salobj::region::weight_sum_field(grid_w, grid_h, sigma_s2)?.save_csv(&out)?;
            Ok(Outcome::Success)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Warnings) => ExitCode::from(2),
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(1)
        }
    }
}
