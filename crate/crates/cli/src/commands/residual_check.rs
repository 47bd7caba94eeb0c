use std::path::PathBuf;

use serde::Serialize;
use sqp_core::diagnostics::{correlation_check, residual_report, ResidualReport, CHECK_ALPHAS};
use sqp_core::garch::{fit_gaussian, residuals, GarchParams, ResidualSeries};
use sqp_core::theory::Law;

use super::{digests, load_all, names, to_json};
use crate::cli::ResidualArgs;
use crate::error::{CliError, CliResult, CoreContext};
use crate::output::OutputDir;
use crate::table::{num, Panel, Table};

#[derive(Debug, Clone, Serialize)]
struct SeriesCheck {
    series: String,
    params: GarchParams,
    /// Data correlation at each level of `CHECK_ALPHAS`.
    data_correlation: Vec<f64>,
    report: ResidualReport,
    #[serde(skip)]
    residuals: ResidualSeries,
}

fn law_name(law: Law) -> String {
    match law {
        Law::Gaussian => "gaussian".into(),
        Law::Student(nu) => format!("student{nu}"),
    }
}

pub(super) fn run(args: &ResidualArgs) -> CliResult<Vec<PathBuf>> {
    if args.max_lag == 0 {
        return Err(CliError::Config("--max-lag: must be at least 1".into()));
    }
    let data = load_all(&args.input)?;
    let mut out = OutputDir::create(&args.out.out_dir)?;

    let mut checks = Vec::with_capacity(data.len());
    for d in &data {
        let r = d.returns.values();
        let what = || d.name().to_string();
        let params = fit_gaussian(r).ctx(what)?;
        let res = residuals(r, &params).ctx(what)?;
        let report = residual_report(&res.values, args.max_lag).ctx(what)?;
        let data_correlation = CHECK_ALPHAS
            .iter()
            .map(|&a| correlation_check(r, a, &[], 0.95).map(|c| c.observed))
            .collect::<sqp_core::Result<Vec<_>>>()
            .ctx(what)?;
        checks.push(SeriesCheck {
            series: d.name().to_string(),
            params,
            data_correlation,
            report,
            residuals: res,
        });
    }

    let mut panel = Panel::new("", names(&data), true);
    let block = panel.block(None);
    block.row("mean", checks.iter().map(|c| Some(c.report.moments.mean)).collect(), 2);
    block.row("Std. dev.", checks.iter().map(|c| Some(c.report.moments.sd)).collect(), 2);
    out.write_table("table_residual_stats.csv", &panel.to_table())?;

    let mut acf = Table::new(["series", "lag", "acf", "band", "inside_band"]);
    for c in &checks {
        let a = &c.report.abs_acf;
        for (i, v) in a.values.iter().enumerate() {
            acf.push([
                c.series.clone(),
                (i + 1).to_string(),
                num(Some(*v)),
                num(Some(a.band)),
                (v.abs() <= a.band).to_string(),
            ]);
        }
    }
    out.write_table("residual_abs_acf.csv", &acf)?;

    let mut corr = Table::new([
        "series",
        "alpha",
        "data_correlation",
        "residual_correlation",
        "effective_n",
        "law",
        "center",
        "ci_lo",
        "ci_hi",
        "residual_inside",
        "residual_inside_any",
    ]);
    for c in &checks {
        for (check, data_r) in c.report.checks.iter().zip(&c.data_correlation) {
            for i in &check.intervals {
                corr.push([
                    c.series.clone(),
                    check.alpha.to_string(),
                    num(Some(*data_r)),
                    num(Some(check.observed)),
                    num(Some(check.effective_n)),
                    law_name(i.law),
                    num(Some(i.center)),
                    num(Some(i.lo)),
                    num(Some(i.hi)),
                    (i.lo <= check.observed && check.observed <= i.hi).to_string(),
                    check.contained.to_string(),
                ]);
            }
        }
    }
    out.write_table("residual_correlation.csv", &corr)?;

    let mut res = Table::new(["series", "date", "residual", "sigma"]);
    for (c, d) in checks.iter().zip(&data) {
        let s = &c.residuals;
        for (j, (z, sigma)) in s.values.iter().zip(&s.sigmas).enumerate() {
            res.push([
                c.series.clone(),
                d.returns.labels()[s.burn_in + j + 1].to_string(),
                num(Some(*z)),
                num(Some(*sigma)),
            ]);
        }
    }
    out.write_table("residuals.csv", &res)?;
    out.write_json("residual_check.json", &checks)?;

    out.finish("residual-check", to_json(args)?, digests(&data), None)
}
