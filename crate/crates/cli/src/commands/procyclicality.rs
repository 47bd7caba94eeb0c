use std::path::PathBuf;

use serde::Serialize;
use sqp_core::stats::{correlate_ratio_volatility, AnalysisReport};

use super::{cells, digests, load_all, names, table_keys, to_json, unique, Cell, Dataset};
use crate::cli::GridCommandArgs;
use crate::error::{CliResult, CoreContext};
use crate::output::OutputDir;
use crate::table::{num, percent_label, Panel, Table};

#[derive(Debug, Clone, Serialize)]
struct SeriesReports {
    series: String,
    reports: Vec<AnalysisReport>,
}

fn mean_ratio(r: &AnalysisReport) -> f64 {
    r.pairs.iter().map(|p| p.ratio).sum::<f64>() / r.pairs.len() as f64
}

pub(super) fn run(args: &GridCommandArgs) -> CliResult<Vec<PathBuf>> {
    let grid = cells(&args.grid)?;
    let data = load_all(&args.input)?;
    let mut out = OutputDir::create(&args.out.out_dir)?;

    let reports = analyze(&data, &grid, args.grid.step_days)?;

    let mut tidy = Table::new([
        "series",
        "T_years",
        "k",
        "alpha",
        "p",
        "n_pairs",
        "excluded",
        "mean_ratio",
        "pearson",
        "spearman",
        "rmse",
        "gamma",
        "gamma_se",
        "gamma_t",
        "gamma_p_value",
    ]);
    let mut pairs = Table::new([
        "series",
        "T_years",
        "k",
        "alpha",
        "p",
        "estimation_date",
        "ratio",
        "log_ratio",
        "volatility",
    ]);
    for (d, sr) in data.iter().zip(&reports) {
        for (c, r) in grid.iter().zip(&sr.reports) {
            let key = [
                d.name().to_string(),
                c.t_years.to_string(),
                c.kind.k().to_string(),
                c.alpha.to_string(),
                c.p.to_string(),
            ];
            let mut row: Vec<String> = key.to_vec();
            row.extend([
                r.pairs.len().to_string(),
                r.excluded.to_string(),
                num(Some(mean_ratio(r))),
                num(Some(r.pearson)),
                num(Some(r.spearman)),
                num(Some(r.rmse)),
                num(Some(r.regression.slope)),
                num(Some(r.regression.slope_se)),
                num(Some(r.regression.t_stat)),
                num(Some(r.regression.p_value)),
            ]);
            tidy.push(row);
            for p in &r.pairs {
                let mut row: Vec<String> = key.to_vec();
                row.extend([
                    d.estimation_date(p.anchor),
                    num(Some(p.ratio)),
                    num(Some(p.log_ratio)),
                    num(Some(p.volatility)),
                ]);
                pairs.push(row);
            }
        }
    }
    out.write_table("procyclicality.csv", &tidy)?;
    out.write_table("ratio_volatility_pairs.csv", &pairs)?;
    out.write_json("procyclicality.json", &reports)?;

    let series = names(&data);
    for (t, kind) in table_keys(&grid) {
        let sub: Vec<(usize, &Cell)> = grid
            .iter()
            .enumerate()
            .filter(|(_, c)| c.t_years == t && c.kind == kind)
            .collect();
        let alphas = unique(sub.iter().map(|(_, c)| c.alpha));
        let ps = unique(sub.iter().map(|(_, c)| c.p));
        let index = |alpha: f64, p: f64| sub.iter().find(|(_, c)| c.alpha == alpha && c.p == p).map(|(i, _)| *i);
        let suffix = format!("T{t}_k{}", kind.k());

        let stat_panel = |corner: &str, f: &dyn Fn(&AnalysisReport) -> f64| {
            let mut panel = Panel::new(corner, series.clone(), true);
            for &alpha in &alphas {
                let block = panel.block(Some(format!("alpha = {}", percent_label(alpha))));
                for &p in &ps {
                    let values = reports
                        .iter()
                        .map(|sr| index(alpha, p).map(|i| f(&sr.reports[i])))
                        .collect();
                    block.row(format!("p={p}"), values, 2);
                }
            }
            panel.to_table()
        };
        out.write_table(&format!("table_pearson_{suffix}.csv"), &stat_panel("Pearson", &|r| r.pearson))?;
        out.write_table(&format!("table_spearman_{suffix}.csv"), &stat_panel("Spearman", &|r| r.spearman))?;
        out.write_table(&format!("table_rmse_{suffix}.csv"), &stat_panel("RMSE", &|r| r.rmse))?;
        out.write_table(&format!("table_mean_ratio_{suffix}.csv"), &stat_panel("Mean ratio", &mean_ratio))?;

        let mut panel = Panel::new("Regression", series.clone(), true);
        for &alpha in &alphas {
            for &p in &ps {
                let title = if ps.len() > 1 {
                    format!("alpha = {}, p={p}", percent_label(alpha))
                } else {
                    format!("alpha = {}", percent_label(alpha))
                };
                let block = panel.block(Some(title));
                let col = |f: &dyn Fn(&AnalysisReport) -> f64| {
                    reports
                        .iter()
                        .map(|sr| index(alpha, p).map(|i| f(&sr.reports[i])))
                        .collect::<Vec<_>>()
                };
                block.row("estimate", col(&|r| r.regression.slope), 1);
                block.row("std. error", col(&|r| r.regression.slope_se), 2);
                block.row("p-value", col(&|r| r.regression.p_value), 2);
            }
        }
        out.write_table(&format!("table_regression_{suffix}.csv"), &panel.to_table())?;
    }

    out.finish("procyclicality", to_json(args)?, digests(&data), None)
}

fn analyze(data: &[Dataset], grid: &[Cell], step: Option<usize>) -> CliResult<Vec<SeriesReports>> {
    data.iter()
        .map(|d| {
            let reports = grid
                .iter()
                .map(|c| {
                    let cfg = c.config(d.frequency(), step)?;
                    correlate_ratio_volatility(d.losses.values(), &cfg)
                        .ctx(|| format!("{} ({})", d.name(), c.describe()))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(SeriesReports {
                series: d.name().to_string(),
                reports,
            })
        })
        .collect()
}
