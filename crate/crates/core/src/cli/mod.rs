//! Command-line front end.
//!
//! `tasep-shocks <verb> [--config run.toml] [flags]`; flags override file keys.
//! Exit status: 0 pass, 2 statistical failure, 3 identity violation, 1 usage or runtime error.

mod config;
mod dispatch;

pub use config::{RunConfig, DEFAULT_OUTPUT, OUTPUT_ENV};
pub use dispatch::{dispatch, Outcome};

use crate::harness::Verdict;
use clap::{Args, Parser, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Simulate,
    TriplePoint,
    Flat,
    Decomposition,
    SlowDecorrelation,
    StepTails,
    Localization,
    TwTable,
    Predict,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Simulate => "simulate",
            Verb::TriplePoint => "triple-point",
            Verb::Flat => "flat",
            Verb::Decomposition => "decomposition",
            Verb::SlowDecorrelation => "slow-decorrelation",
            Verb::StepTails => "step-tails",
            Verb::Localization => "localization",
            Verb::TwTable => "tw-table",
            Verb::Predict => "predict",
        }
    }

    pub fn from_name(name: &str) -> Option<Verb> {
        Verb::from_str(name, false).ok()
    }
}

#[derive(Debug, Parser)]
#[command(name = "tasep-shocks", version, about = "Monte Carlo experiments on TASEP shock fluctuations", allow_negative_numbers = true)]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// TOML file with run keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// One density, or three increasing densities separated by commas.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    densities: Option<Vec<f64>>,
    /// Macroscopic scale of the three-density profile.
    #[arg(long = "T")]
    big_t: Option<i64>,
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated times for trend experiments.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    times: Option<Vec<f64>>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Cylinder exponent offset [default: 0.15].
    #[arg(long)]
    eps: Option<f64>,
    /// Decorrelation exponent, or step fraction for step-tails [default: 0.8].
    #[arg(long)]
    nu: Option<f64>,
    /// Exceedance threshold in units of t^{1/3} [default: 0.5].
    #[arg(long)]
    delta: Option<f64>,
    /// Upper bound on the final probability for trend experiments.
    #[arg(long)]
    threshold: Option<f64>,
    /// KS pass threshold [default: 0.05].
    #[arg(long)]
    ks_tolerance: Option<f64>,
    /// [default: 10000]
    #[arg(long)]
    replicas: Option<usize>,
    /// [default: 1]
    #[arg(long, alias = "seed")]
    master_seed: Option<u64>,
    /// Output directory [default: $TASEP_SHOCKS_OUT, else ./tasep-shocks-out].
    #[arg(long, alias = "out")]
    output_dir: Option<PathBuf>,
    /// Gauss-Legendre order of the Tracy-Widom evaluator [default: 64].
    #[arg(long)]
    quadrature_order: Option<usize>,
    /// Worker threads [default: all cores].
    #[arg(long)]
    workers: Option<usize>,
    /// Label range LO,HI for simulate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    labels: Option<Vec<i64>>,
    /// Grid START,STOP,STEP for tw-table and predict.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
}

impl Flags {
    fn into_config(self, verb: Verb) -> crate::error::Result<RunConfig> {
        let labels = match self.labels.as_deref() {
            None => None,
            Some(&[lo, hi]) => Some([lo, hi]),
            Some(_) => return Err(crate::error::Error::config("labels", "expects LO,HI")),
        };
        let grid = match self.grid.as_deref() {
            None => None,
            Some(&[a, b, c]) => Some([a, b, c]),
            Some(_) => return Err(crate::error::Error::config("grid", "expects START,STOP,STEP")),
        };
        Ok(RunConfig {
            experiment: Some(verb.name().to_string()),
            densities: self.densities,
            big_t: self.big_t,
            t: self.t,
            times: self.times,
            u: self.u,
            tau: self.tau,
            alpha: self.alpha,
            eps: self.eps,
            nu: self.nu,
            delta: self.delta,
            threshold: self.threshold,
            ks_tolerance: self.ks_tolerance,
            replicas: self.replicas,
            master_seed: self.master_seed,
            output_dir: self.output_dir,
            quadrature_order: self.quadrature_order,
            workers: self.workers,
            labels,
            grid,
        })
    }
}

pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass => 0,
        Verdict::StatisticalFail => 2,
        Verdict::IdentityViolation => 3,
    }
}

/// Parses `args` (program name first), runs the verb and returns the exit status.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let flags = match cli.flags.into_config(cli.verb) {
        Ok(flags) => flags,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let merged = match &cli.config {
        Some(path) => match RunConfig::from_file(path) {
            Ok(file) => file.overlaid(&flags),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        },
        None => flags,
    };
    match dispatch(cli.verb, &merged) {
        Ok(outcome) => {
            println!("{}", outcome.summary_line);
            println!("outputs written to {}", outcome.output_dir.display());
            exit_code(outcome.verdict)
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
