use std::path::PathBuf;

use serde::Serialize;
use sqp_core::stats::{bin_ratios_by_volatility, ratio_volatility_pairs, BinReport};

use super::{cells, digests, load_all, names, to_json, Cell};
use crate::cli::BinsArgs;
use crate::error::{CliError, CliResult, CoreContext};
use crate::output::OutputDir;
use crate::table::{num, percent_label, Panel, Table};

#[derive(Debug, Clone, Serialize)]
struct BinRun {
    series: String,
    t_years: usize,
    k: u8,
    alpha: f64,
    p: f64,
    report: BinReport,
}

pub(super) fn run(args: &BinsArgs) -> CliResult<Vec<PathBuf>> {
    if args.bins.is_empty() || args.bins.contains(&0) {
        return Err(CliError::Config("--bins: counts must be at least 1".into()));
    }
    let grid = cells(&args.grid())?;
    let data = load_all(&args.input)?;
    let mut out = OutputDir::create(&args.out.out_dir)?;

    // runs[cell][bins][series]
    let mut runs: Vec<Vec<Vec<BinRun>>> = Vec::new();
    for c in &grid {
        let mut per_count: Vec<Vec<BinRun>> = args.bins.iter().map(|_| Vec::new()).collect();
        for d in &data {
            let what = || format!("{} ({})", d.name(), c.describe());
            let cfg = c.config(d.frequency(), args.step_days)?;
            let (pairs, _) = ratio_volatility_pairs(d.losses.values(), &cfg).ctx(what)?;
            let by_vol: Vec<(f64, f64)> = pairs.iter().map(|p| (p.ratio, p.volatility)).collect();
            for (slot, &n) in per_count.iter_mut().zip(&args.bins) {
                slot.push(BinRun {
                    series: d.name().to_string(),
                    t_years: c.t_years,
                    k: c.kind.k(),
                    alpha: c.alpha,
                    p: c.p,
                    report: bin_ratios_by_volatility(&by_vol, n).ctx(what)?,
                });
            }
        }
        runs.push(per_count);
    }

    let mut tidy = Table::new([
        "series",
        "T_years",
        "k",
        "alpha",
        "p",
        "n_bins",
        "bin",
        "volatility_lo",
        "volatility_hi",
        "count",
        "mean_ratio",
    ]);
    for run in runs.iter().flatten().flatten() {
        for (i, b) in run.report.bins.iter().enumerate() {
            tidy.push([
                run.series.clone(),
                run.t_years.to_string(),
                run.k.to_string(),
                run.alpha.to_string(),
                run.p.to_string(),
                run.report.n_bins.to_string(),
                (i + 1).to_string(),
                num(Some(b.lo)),
                num(Some(b.hi)),
                b.count.to_string(),
                num(b.mean_ratio),
            ]);
        }
    }
    out.write_table("bins.csv", &tidy)?;
    let flat: Vec<&BinRun> = runs.iter().flatten().flatten().collect();
    out.write_json("bins.json", &flat)?;

    let series = names(&data);
    for (c, per_count) in grid.iter().zip(&runs) {
        for (&n, per_series) in args.bins.iter().zip(per_count) {
            out.write_table(&panel_name(c, n), &panel(&series, n, per_series).to_table())?;
        }
    }

    out.finish("bins", to_json(args)?, digests(&data), None)
}

fn panel_name(c: &Cell, n: usize) -> String {
    format!(
        "table_bins{n}_T{}_k{}_a{}_p{}.csv",
        c.t_years,
        c.kind.k(),
        percent_label(c.alpha).trim_end_matches('%'),
        c.p
    )
}

fn panel(series: &[String], n: usize, runs: &[BinRun]) -> Panel {
    let mut p = Panel::new("Volatility bin", series.to_vec(), true);
    let block = p.block(None);
    for i in 0..n {
        let values = runs.iter().map(|r| r.report.bins[i].mean_ratio).collect();
        block.row(format!("bin {}", i + 1), values, 2);
    }
    p
}
