use std::path::PathBuf;

use serde::Serialize;
use sqp_core::quantile::{sqp_series, unconditional_var, SqpConfig};
use sqp_core::series::WindowSpec;

use super::{check_alphas, check_ps, check_years, digests, load_all, names, to_json, unique};
use crate::cli::SqpArgs;
use crate::error::{CliError, CliResult, CoreContext};
use crate::output::OutputDir;
use crate::table::{num, percent_label, Panel, Table};

#[derive(Debug, Clone, Serialize)]
struct SummaryRow {
    series: String,
    t_years: usize,
    p: f64,
    alpha: f64,
    windows: usize,
    mean_sqp_pct: f64,
    unconditional_var_pct: f64,
}

pub(super) fn run(args: &SqpArgs) -> CliResult<Vec<PathBuf>> {
    check_alphas(&args.alpha)?;
    check_ps(&args.p)?;
    check_years(&args.t_years)?;
    if args.step_days == Some(0) {
        return Err(CliError::Config("--step-days: must be at least 1".into()));
    }
    let data = load_all(&args.input)?;
    let mut out = OutputDir::create(&args.out.out_dir)?;

    let mut series_table = Table::new(["series", "T_years", "p", "alpha", "estimation_date", "sqp"]);
    let mut summary = Vec::new();
    for d in &data {
        let year = d.frequency().per_year();
        let step = args.step_days.unwrap_or(((year + 6) / 12).max(1));
        for &t in &args.t_years {
            let window = WindowSpec::new(t * year, step).ctx(|| format!("{}: T={t}y", d.name()))?;
            for &p in &args.p {
                for &alpha in &args.alpha {
                    let what = || format!("{}: p={p}, alpha={}, T={t}y", d.name(), percent_label(alpha));
                    let cfg = SqpConfig::new(p, alpha, window).ctx(what)?;
                    let estimates = sqp_series(&d.losses, &cfg).ctx(what)?;
                    for q in &estimates {
                        series_table.push([
                            d.name().to_string(),
                            t.to_string(),
                            p.to_string(),
                            alpha.to_string(),
                            d.estimation_date(q.anchor),
                            num(Some(q.value)),
                        ]);
                    }
                    let mean = estimates.iter().map(|q| q.value).sum::<f64>() / estimates.len() as f64;
                    summary.push(SummaryRow {
                        series: d.name().to_string(),
                        t_years: t,
                        p,
                        alpha,
                        windows: estimates.len(),
                        mean_sqp_pct: 100.0 * mean,
                        unconditional_var_pct: 100.0 * unconditional_var(&d.losses, alpha).ctx(what)?,
                    });
                }
            }
        }
    }
    out.write_table("sqp_series.csv", &series_table)?;

    let mut summary_table = Table::new([
        "series",
        "T_years",
        "p",
        "alpha",
        "windows",
        "mean_sqp_pct",
        "unconditional_var_pct",
    ]);
    for s in &summary {
        summary_table.push([
            s.series.clone(),
            s.t_years.to_string(),
            s.p.to_string(),
            s.alpha.to_string(),
            s.windows.to_string(),
            num(Some(s.mean_sqp_pct)),
            num(Some(s.unconditional_var_pct)),
        ]);
    }
    out.write_table("sqp_summary.csv", &summary_table)?;
    out.write_json("sqp_summary.json", &summary)?;

    let series_names = names(&data);
    let lookup = |series: &str, t: usize, p: f64, alpha: f64| {
        summary
            .iter()
            .find(|s| s.series == series && s.t_years == t && s.p == p && s.alpha == alpha)
            .map(|s| s.mean_sqp_pct)
    };
    let alphas = unique(args.alpha.iter().copied());
    let base = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    for &t in &unique(args.t_years.iter().map(|t| *t as f64)) {
        let t = t as usize;
        let mut panel = Panel::new("Mean for", series_names.clone(), true);
        for &alpha in &alphas {
            let block = panel.block(Some(format!("Mean {t}y in % (alpha = {})", percent_label(alpha))));
            for &p in &unique(args.p.iter().copied()) {
                let values = series_names.iter().map(|s| lookup(s, t, p, alpha)).collect();
                block.row(format!("p={p}"), values, 2);
            }
        }
        for &alpha in alphas.iter().filter(|a| **a != base) {
            let block = panel.block(Some(format!(
                "Ratio of mean {t}y at {} over {}",
                percent_label(alpha),
                percent_label(base)
            )));
            for &p in &unique(args.p.iter().copied()) {
                let values = series_names
                    .iter()
                    .map(|s| Some(lookup(s, t, p, alpha)? / lookup(s, t, p, base)?))
                    .collect();
                block.row(format!("p={p}"), values, 2);
            }
        }
        out.write_table(&format!("table_sqp_mean_T{t}.csv"), &panel.to_table())?;
    }

    out.finish("sqp", to_json(args)?, digests(&data), None)
}
