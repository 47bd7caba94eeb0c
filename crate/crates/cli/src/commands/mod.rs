//! Subcommand implementations. Each returns the paths it wrote, manifest
//! included.

mod bins;
mod experiment;
mod fit_garch;
mod procyclicality;
mod residual_check;
mod sqp;

use std::collections::HashSet;
use std::path::PathBuf;

use chrono::NaiveDate;
use sqp_core::series::{log_returns, losses, Frequency, LossSeries, ReturnSeries};
use sqp_core::stats::AnalysisConfig;
use sqp_core::volatility::VolatilityKind;

use crate::cli::{Cli, Command, GridArgs, InputArgs};
use crate::error::{CliError, CliResult, CoreContext};
use crate::executor::configure_threads;
use crate::ingest::{load, LoadedSeries};
use crate::output::InputDigest;
use crate::table::percent_label;

pub fn run(cli: Cli) -> CliResult<Vec<PathBuf>> {
    configure_threads(cli.threads);
    match cli.command {
        Command::Sqp(a) => sqp::run(&a),
        Command::Procyclicality(a) => procyclicality::run(&a),
        Command::FitGarch(a) => fit_garch::run(&a),
        Command::ResidualCheck(a) => residual_check::run(&a),
        Command::Experiment(a) => experiment::run(&a),
        Command::Bins(a) => bins::run(&a),
    }
}

/// One input file with its returns and losses.
pub(crate) struct Dataset {
    pub input: LoadedSeries,
    pub returns: ReturnSeries<NaiveDate>,
    pub losses: LossSeries<NaiveDate>,
}

impl Dataset {
    pub fn name(&self) -> &str {
        &self.input.name
    }

    pub fn frequency(&self) -> Frequency {
        self.input.prices.frequency()
    }

    /// Date of the last return before index `anchor`.
    pub fn estimation_date(&self, anchor: usize) -> String {
        self.returns.labels()[anchor - 1].to_string()
    }
}

pub(crate) fn load_all(args: &InputArgs) -> CliResult<Vec<Dataset>> {
    let schema = args.schema();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(args.inputs.len());
    for path in &args.inputs {
        let input = load(path, &schema, args.frequency.into())?;
        if !seen.insert(input.name.clone()) {
            return Err(CliError::Input {
                path: path.clone(),
                message: format!("another input is already named `{}`", input.name),
            });
        }
        let returns = log_returns(&input.prices).ctx(|| input.name.clone())?;
        let losses = losses(&returns);
        out.push(Dataset { input, returns, losses });
    }
    Ok(out)
}

pub(crate) fn digests(data: &[Dataset]) -> Vec<InputDigest> {
    data.iter().map(|d| InputDigest::from(&d.input)).collect()
}

pub(crate) fn names(data: &[Dataset]) -> Vec<String> {
    data.iter().map(|d| d.name().to_string()).collect()
}

/// One point of the analysis grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cell {
    pub t_years: usize,
    pub kind: VolatilityKind,
    pub alpha: f64,
    pub p: f64,
}

impl Cell {
    pub fn describe(&self) -> String {
        format!(
            "p={}, alpha={}, T={}y, k={}",
            self.p,
            percent_label(self.alpha),
            self.t_years,
            self.kind.k()
        )
    }

    pub fn config(&self, frequency: Frequency, step: Option<usize>) -> CliResult<AnalysisConfig> {
        let cfg = AnalysisConfig::for_frequency(self.p, self.alpha, self.t_years, self.kind, frequency)
            .ctx(|| self.describe())?;
        match step {
            Some(s) => cfg.with_step(s).ctx(|| "--step-days".into()),
            None => Ok(cfg),
        }
    }
}

pub(crate) fn check_alphas(alphas: &[f64]) -> CliResult<()> {
    match alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        Some(a) => Err(CliError::Config(format!("--alpha: {a} is outside (0, 1)"))),
        None if alphas.is_empty() => Err(CliError::Config("--alpha: at least one level is required".into())),
        None => Ok(()),
    }
}

pub(crate) fn check_ps(ps: &[f64]) -> CliResult<()> {
    match ps.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        Some(p) => Err(CliError::Config(format!("--p: {p} must be finite and non-negative"))),
        None if ps.is_empty() => Err(CliError::Config("--p: at least one exponent is required".into())),
        None => Ok(()),
    }
}

pub(crate) fn check_years(ts: &[usize]) -> CliResult<()> {
    if ts.is_empty() || ts.contains(&0) {
        return Err(CliError::Config("--T-years: values must be at least 1".into()));
    }
    Ok(())
}

/// Grid cells ordered by `T`, `k`, `alpha`, then `p`.
pub(crate) fn cells(grid: &GridArgs) -> CliResult<Vec<Cell>> {
    check_alphas(&grid.alpha)?;
    check_ps(&grid.p)?;
    check_years(&grid.t_years)?;
    if grid.step_days == Some(0) {
        return Err(CliError::Config("--step-days: must be at least 1".into()));
    }
    let kinds = grid
        .k
        .iter()
        .map(|k| VolatilityKind::from_k(*k).map_err(|_| CliError::Config(format!("--k: {k} must be 1 or 2"))))
        .collect::<CliResult<Vec<_>>>()?;
    if kinds.is_empty() {
        return Err(CliError::Config("--k: at least one value is required".into()));
    }
    let mut out = Vec::new();
    for &t_years in &grid.t_years {
        for &kind in &kinds {
            for &alpha in &grid.alpha {
                for &p in &grid.p {
                    out.push(Cell { t_years, kind, alpha, p });
                }
            }
        }
    }
    Ok(out)
}

/// `(T, k)` pairs in grid order.
pub(crate) fn table_keys(cells: &[Cell]) -> Vec<(usize, VolatilityKind)> {
    let mut keys: Vec<(usize, VolatilityKind)> = Vec::new();
    for c in cells {
        if !keys.contains(&(c.t_years, c.kind)) {
            keys.push((c.t_years, c.kind));
        }
    }
    keys
}

pub(crate) fn unique(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> CliResult<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| CliError::Serialize(e.to_string()))
}
