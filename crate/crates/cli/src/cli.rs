use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sqp_core::series::Frequency;

use crate::ingest::Schema;

#[derive(Debug, Parser)]
#[command(name = "sqp", version, about = "Rolling quantile risk measures and their pro-cyclicality")]
pub struct Cli {
    /// Worker threads for simulations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rolling sample quantile processes and their whole-sample averages.
    Sqp(SqpArgs),
    /// Correlation, RMSE, regression and binning of look-forward ratios
    /// against realized volatility.
    Procyclicality(GridCommandArgs),
    /// Gaussian GARCH(1,1) fit, Student degrees of freedom on losses and
    /// simulated volatility.
    FitGarch(FitGarchArgs),
    /// GARCH residual moments, |residual| autocorrelation and correlation
    /// checks against iid confidence intervals.
    ResidualCheck(ResidualArgs),
    /// Monte Carlo experiment described by a TOML file.
    Experiment(ExperimentArgs),
    /// Mean look-forward ratio within uniform volatility bins.
    Bins(BinsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrequencyArg {
    Daily,
    /// Every fifth daily observation.
    Weekly,
}

impl From<FrequencyArg> for Frequency {
    fn from(f: FrequencyArg) -> Self {
        match f {
            FrequencyArg::Daily => Frequency::Daily,
            FrequencyArg::Weekly => Frequency::Weekly,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Price files (comma or tab separated, with a header row). Repeatable.
    #[arg(long = "input", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,

    #[arg(long, default_value = "date")]
    pub date_column: String,

    #[arg(long, default_value = "close")]
    pub close_column: String,

    #[arg(long, value_enum, default_value_t = FrequencyArg::Daily)]
    pub frequency: FrequencyArg,
}

impl InputArgs {
    pub fn schema(&self) -> Schema {
        Schema {
            date_column: self.date_column.clone(),
            close_column: self.close_column.clone(),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Weight exponents p.
    #[arg(long = "p", value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub p: Vec<f64>,

    /// Quantile levels.
    #[arg(long = "alpha", value_delimiter = ',', default_value = "0.95,0.99")]
    pub alpha: Vec<f64>,

    /// Estimation window lengths in years.
    #[arg(long = "T-years", value_delimiter = ',', default_value = "1")]
    pub t_years: Vec<usize>,

    /// Volatility exponent: 1 (mean absolute deviation) or 2 (standard deviation).
    #[arg(long = "k", value_delimiter = ',', default_value = "1")]
    pub k: Vec<u8>,

    /// Roll step in observations (default: a month, i.e. 21 daily or 4 weekly).
    #[arg(long = "step-days")]
    pub step_days: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SqpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutArgs,

    /// Weight exponents p.
    #[arg(long = "p", value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub p: Vec<f64>,

    /// Quantile levels.
    #[arg(long = "alpha", value_delimiter = ',', default_value = "0.95,0.99")]
    pub alpha: Vec<f64>,

    /// Estimation window lengths in years.
    #[arg(long = "T-years", value_delimiter = ',', default_value = "1")]
    pub t_years: Vec<usize>,

    /// Roll step in observations (default: a month).
    #[arg(long = "step-days")]
    pub step_days: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridCommandArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BinsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutArgs,

    /// Bin counts.
    #[arg(long = "bins", value_delimiter = ',', default_value = "5,10")]
    pub bins: Vec<usize>,

    /// Weight exponents p.
    #[arg(long = "p", value_delimiter = ',', default_value = "0")]
    pub p: Vec<f64>,

    /// Quantile levels.
    #[arg(long = "alpha", value_delimiter = ',', default_value = "0.95")]
    pub alpha: Vec<f64>,

    /// Estimation window lengths in years.
    #[arg(long = "T-years", value_delimiter = ',', default_value = "1")]
    pub t_years: Vec<usize>,

    /// Volatility exponent: 1 or 2.
    #[arg(long = "k", value_delimiter = ',', default_value = "1")]
    pub k: Vec<u8>,

    /// Roll step in observations (default: a month).
    #[arg(long = "step-days")]
    pub step_days: Option<usize>,
}

impl BinsArgs {
    pub fn grid(&self) -> GridArgs {
        GridArgs {
            p: self.p.clone(),
            alpha: self.alpha.clone(),
            t_years: self.t_years.clone(),
            k: self.k.clone(),
            step_days: self.step_days,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitGarchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutArgs,

    /// Simulated paths per fitted model for the volatility comparison.
    #[arg(long, default_value_t = 1000)]
    pub replications: usize,

    /// Simulated path length (default: the length of the return series).
    #[arg(long)]
    pub sim_length: Option<usize>,

    /// Master seed of the simulated paths.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub out: OutArgs,

    /// Largest lag of the |residual| autocorrelation.
    #[arg(long, default_value_t = 100)]
    pub max_lag: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExperimentArgs {
    /// Experiment file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,

    /// Overrides the master seed of the experiment file.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Overrides the replication count of the experiment file.
    #[arg(long)]
    pub replications: Option<usize>,
}
