use std::path::PathBuf;

use serde::Serialize;
use sqp_core::garch::{fit_gaussian, fit_student_nu_on_losses, GarchFitReport, GarchParams, NuFit};
use sqp_core::montecarlo::{simulated_volatility, Summary};

use super::{digests, load_all, names, to_json};
use crate::cli::FitGarchArgs;
use crate::error::{CliResult, CoreContext};
use crate::executor::Rayon;
use crate::output::OutputDir;
use crate::table::{num, Panel, Table};

#[derive(Debug, Clone, Serialize)]
struct SeriesFit {
    series: String,
    gaussian: GarchFitReport,
    gaussian_simulated: Option<Summary>,
    nu: NuFit,
    student: GarchFitReport,
    student_simulated: Option<Summary>,
}

pub(super) fn run(args: &FitGarchArgs) -> CliResult<Vec<PathBuf>> {
    let data = load_all(&args.input)?;
    let mut out = OutputDir::create(&args.out.out_dir)?;

    let mut fits = Vec::with_capacity(data.len());
    for d in &data {
        let r = d.returns.values();
        let what = || d.name().to_string();
        let g = fit_gaussian(r).ctx(what)?;
        let nu = fit_student_nu_on_losses(r, &g).ctx(what)?;
        let s = GarchParams::composite(&g, nu.nu).ctx(what)?;
        let simulate = |params: &GarchParams| -> CliResult<Option<Summary>> {
            if args.replications == 0 {
                return Ok(None);
            }
            let n = args.sim_length.unwrap_or(r.len());
            simulated_volatility(params, n, args.replications, args.seed, &Rayon)
                .map(Some)
                .ctx(what)
        };
        let mut gaussian = GarchFitReport::new(r, g).ctx(what)?;
        let gaussian_simulated = simulate(&g)?;
        gaussian.mean_sim_volatility_pct = gaussian_simulated.map(|s| s.mean);
        let mut student = GarchFitReport::new(r, s).ctx(what)?;
        let student_simulated = simulate(&s)?;
        student.mean_sim_volatility_pct = student_simulated.map(|s| s.mean);
        fits.push(SeriesFit {
            series: d.name().to_string(),
            gaussian,
            gaussian_simulated,
            nu,
            student,
            student_simulated,
        });
    }

    let mut tidy = Table::new([
        "series",
        "n_obs",
        "omega",
        "alpha",
        "beta",
        "alpha_plus_beta",
        "tau_cor_days",
        "normalized_loglik_gaussian",
        "sim_volatility_gaussian_pct",
        "sim_volatility_gaussian_sd",
        "historical_volatility_pct",
        "nu",
        "nu_at_bound",
        "nu_loss_residuals",
        "normalized_loglik_student",
        "sim_volatility_student_pct",
        "sim_volatility_student_sd",
    ]);
    for f in &fits {
        let p = &f.gaussian.params;
        tidy.push([
            f.series.clone(),
            f.gaussian.n_obs.to_string(),
            num(Some(p.omega)),
            num(Some(p.alpha)),
            num(Some(p.beta)),
            num(Some(p.persistence())),
            num(f.gaussian.tau_cor_days),
            num(Some(f.gaussian.normalized_log_likelihood)),
            num(f.gaussian_simulated.map(|s| s.mean)),
            num(f.gaussian_simulated.and_then(|s| s.sd)),
            num(Some(f.gaussian.historical_volatility_pct)),
            num(Some(f.nu.nu)),
            f.nu.at_bound.to_string(),
            f.nu.n.to_string(),
            num(Some(f.student.normalized_log_likelihood)),
            num(f.student_simulated.map(|s| s.mean)),
            num(f.student_simulated.and_then(|s| s.sd)),
        ]);
    }
    out.write_table("garch_fit.csv", &tidy)?;
    out.write_json("garch_fit.json", &fits)?;

    let mut panel = Panel::new("", names(&data), false);
    let col = |f: &dyn Fn(&SeriesFit) -> Option<f64>| fits.iter().map(f).collect::<Vec<_>>();
    let block = panel.block(Some("Gaussian innovations".into()));
    block.row("omega [1e-6]", col(&|f| Some(f.gaussian.params.omega * 1e6)), 2);
    block.row("alpha [1e-1]", col(&|f| Some(f.gaussian.params.alpha * 10.0)), 2);
    block.row("beta [1e-1]", col(&|f| Some(f.gaussian.params.beta * 10.0)), 2);
    block.row("alpha+beta", col(&|f| Some(f.gaussian.params.persistence())), 3);
    block.row("tau_cor (days)", col(&|f| f.gaussian.tau_cor_days), 1);
    let block = panel.block(Some("Fitting results".into()));
    block.row("Normalized likelihood", col(&|f| Some(f.gaussian.normalized_log_likelihood)), 2);
    block.row("Volatility [%]", col(&|f| f.gaussian.mean_sim_volatility_pct), 1);
    block.row("Historical [%]", col(&|f| Some(f.gaussian.historical_volatility_pct)), 1);
    let block = panel.block(Some("Student innovations (fitted on losses) with Gaussian GARCH parameters".into()));
    block.row("nu", col(&|f| Some(f.nu.nu)), 2);
    block.row("Normalized likelihood", col(&|f| Some(f.student.normalized_log_likelihood)), 2);
    block.row("Volatility [%]", col(&|f| f.student.mean_sim_volatility_pct), 1);
    out.write_table("table_garch_fit.csv", &panel.to_table())?;

    let seed = (args.replications > 0).then_some(args.seed);
    out.finish("fit-garch", to_json(args)?, digests(&data), seed)
}
