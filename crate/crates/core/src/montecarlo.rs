//! Monte Carlo experiments on the ratio/volatility dependence.
//!
//! Every replication draws from its own ChaCha8 stream, selected by the
//! replication index under a shared master seed, and results are reduced in
//! index order. The outcome is therefore the same for any [`Executor`].

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::garch::{simulate_with_rng, GarchParams, SimulationOptions};
use crate::math::{ln, mean, sample_variance, sqrt};
use crate::quantile::{empirical_quantile, weighted_quantile};
use crate::stats::{fisher_ci, lookforward_ratios, pearson, spearman, AnalysisConfig};
use crate::theory::{log_ratio_volatility_correlation, Law};
use crate::volatility::{sample_volatility, VolatilityKind};
use crate::{Error, Result, MONTH_DAYS, YEAR_DAYS};

pub use crate::garch::standardized_student_sampler;

/// Runs independent indexed jobs and returns their results in index order.
pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Single-threaded executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}

/// Random generator for one replication.
pub fn replication_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Generator {
    Normal { mu: f64, sigma: f64 },
    /// `mu + sigma * t_nu` with a unit-scale Student-t.
    Student { nu: f64, mu: f64, sigma: f64 },
    Garch { params: GarchParams },
}

impl Generator {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Generator::Normal { mu, sigma } | Generator::Student { mu, sigma, .. } => {
                if !(sigma > 0.0 && sigma.is_finite()) || !mu.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "sigma",
                        reason: "must be positive and finite, with a finite mu",
                    });
                }
                if let Generator::Student { nu, .. } = *self {
                    if !(nu > 2.0) {
                        return Err(Error::InvalidDegreesOfFreedom(nu));
                    }
                }
                Ok(())
            }
            Generator::Garch { params } => {
                if params.is_stationary() {
                    Ok(())
                } else {
                    Err(Error::NonStationary(params.persistence()))
                }
            }
        }
    }

    /// Law of the returns for iid generators.
    pub fn law(&self) -> Option<Law> {
        match *self {
            Generator::Normal { .. } => Some(Law::Gaussian),
            Generator::Student { nu, .. } => Some(Law::Student(nu)),
            Generator::Garch { .. } => None,
        }
    }

    pub fn sample_path<R: Rng + ?Sized>(&self, n: usize, burn_in: usize, rng: &mut R) -> Result<Vec<f64>> {
        match *self {
            Generator::Normal { mu, sigma } => Ok((0..n)
                .map(|_| {
                    let z: f64 = rng.sample(StandardNormal);
                    mu + sigma * z
                })
                .collect()),
            Generator::Student { nu, mu, sigma } => {
                let dist = StudentT::new(nu).map_err(|_| Error::InvalidDegreesOfFreedom(nu))?;
                Ok((0..n).map(|_| mu + sigma * dist.sample(rng)).collect())
            }
            Generator::Garch { params } => {
                let options = SimulationOptions {
                    burn_in,
                    allow_nonstationary: false,
                };
                Ok(simulate_with_rng(&params, n, options, rng)?.returns)
            }
        }
    }
}

/// How the iid experiment pairs quantile ratios with volatilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum IidPairing {
    /// Correlation over the monthly rolling anchors of each path, averaged
    /// over replications.
    #[default]
    Rolling,
    /// One disjoint (past quantile, future quantile, volatility) triple per
    /// replication; a single correlation pooled over replications.
    DisjointTriple,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McConfig {
    pub generator: Generator,
    pub path_length: usize,
    pub replications: usize,
    pub alphas: Vec<f64>,
    pub p_values: Vec<f64>,
    pub kinds: Vec<VolatilityKind>,
    pub t_years: Vec<usize>,
    pub year_len: usize,
    pub step: usize,
    pub master_seed: u64,
    pub pairing: IidPairing,
    pub burn_in: usize,
}

impl McConfig {
    pub fn new(generator: Generator, replications: usize, master_seed: u64) -> Self {
        Self {
            generator,
            path_length: 8000,
            replications,
            alphas: alloc::vec![0.95, 0.99],
            p_values: alloc::vec![0.0],
            kinds: alloc::vec![VolatilityKind::Mad, VolatilityKind::Std],
            t_years: alloc::vec![1],
            year_len: YEAR_DAYS,
            step: MONTH_DAYS,
            master_seed,
            pairing: IidPairing::Rolling,
            burn_in: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        if self.replications == 0 {
            return Err(Error::InvalidParameter {
                name: "replications",
                reason: "must be at least 1",
            });
        }
        if self.alphas.is_empty() || self.p_values.is_empty() || self.kinds.is_empty() || self.t_years.is_empty() {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "alphas, p_values, kinds and t_years must be non-empty",
            });
        }
        for key in self.cells() {
            self.analysis_config(&key)?;
        }
        if self.pairing == IidPairing::Rolling || matches!(self.generator, Generator::Garch { .. }) {
            let longest = self.t_years.iter().max().copied().unwrap_or(1);
            let needed = (longest + 1) * self.year_len + self.step;
            if self.path_length < needed {
                return Err(Error::TooShort {
                    needed,
                    got: self.path_length,
                });
            }
        }
        Ok(())
    }

    /// Grid cells, ordered by `T`, then `p`, then `alpha`, then `k`.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for &t_years in &self.t_years {
            for &p in &self.p_values {
                for &alpha in &self.alphas {
                    for &kind in &self.kinds {
                        out.push(CellKey {
                            p,
                            alpha,
                            kind,
                            t_years,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn analysis_config(&self, key: &CellKey) -> Result<AnalysisConfig> {
        AnalysisConfig::with_lengths(key.p, key.alpha, key.t_years, key.kind, self.year_len, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellKey {
    pub p: f64,
    pub alpha: f64,
    pub kind: VolatilityKind,
    pub t_years: usize,
}

/// Mean and standard deviation over the finite values.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub mean: f64,
    /// `None` for a single value.
    pub sd: Option<f64>,
    pub n: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let n = finite.len();
        Self {
            mean: if n > 0 { mean(&finite) } else { f64::NAN },
            sd: (n > 1).then(|| sqrt(sample_variance(&finite))),
            n,
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> Option<f64> {
        self.sd.map(|s| s / sqrt(self.n as f64))
    }
}

/// Confidence level at which a correlation is found negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Significance {
    NotSignificant,
    Level85,
    Level90,
    Level95,
    Level99,
}

impl Significance {
    pub const LEVELS: [(f64, Significance); 4] = [
        (0.99, Significance::Level99),
        (0.95, Significance::Level95),
        (0.90, Significance::Level90),
        (0.85, Significance::Level85),
    ];

    /// Table marker: `**`, `*`, nothing, dagger; `ns` below 85%.
    pub fn marker(self) -> &'static str {
        match self {
            Significance::Level99 => "**",
            Significance::Level95 => "*",
            Significance::Level90 => "",
            Significance::Level85 => "\u{2020}",
            Significance::NotSignificant => "ns",
        }
    }
}

/// Percentile of sorted data with linear interpolation between ranks.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = crate::math::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Highest level whose two-sided percentile interval of the replication
/// values lies entirely below zero.
pub fn significance(values: &[f64]) -> Significance {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if sorted.len() < 2 {
        return Significance::NotSignificant;
    }
    sorted.sort_by(f64::total_cmp);
    for (level, sig) in Significance::LEVELS {
        if percentile(&sorted, 0.5 + 0.5 * level) < 0.0 {
            return sig;
        }
    }
    Significance::NotSignificant
}

/// Same ladder for a single pooled correlation, using Fisher intervals.
pub fn pooled_significance(r: f64, n: usize) -> Significance {
    for (level, sig) in Significance::LEVELS {
        if let Ok((_, hi)) = fisher_ci(r, n as f64, level) {
            if hi < 0.0 {
                return sig;
            }
        }
    }
    Significance::NotSignificant
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McCell {
    pub key: CellKey,
    pub pearson: Summary,
    pub spearman: Summary,
    pub pearson_significance: Significance,
    pub spearman_significance: Significance,
    /// Large-sample iid value of the Pearson correlation, when one exists.
    pub theory: Option<f64>,
    /// The volatility estimator has no finite variance under the law
    /// (Student `nu <= 4` with `k = 2`).
    pub no_theoretical_counterpart: bool,
    /// Per-replication values (a single pooled value for disjoint triples).
    pub pearson_values: Vec<f64>,
    pub spearman_values: Vec<f64>,
    /// Replications where the correlation could not be computed.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McResult {
    pub config: McConfig,
    pub cells: Vec<McCell>,
}

impl McResult {
    pub fn cell(&self, p: f64, alpha: f64, kind: VolatilityKind, t_years: usize) -> Option<&McCell> {
        self.cells.iter().find(|c| {
            c.key.p == p && c.key.alpha == alpha && c.key.kind == kind && c.key.t_years == t_years
        })
    }
}

/// Pearson and Spearman of every cell on one path, `NaN` where undefined.
pub fn analyze_path(losses: &[f64], config: &McConfig, cells: &[CellKey]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(cells.len());
    let mut i = 0;
    while i < cells.len() {
        // Cells sharing (T, p, alpha) share the ratios.
        let key = cells[i];
        let mut j = i;
        while j < cells.len()
            && cells[j].t_years == key.t_years
            && cells[j].p == key.p
            && cells[j].alpha == key.alpha
        {
            j += 1;
        }
        let ratios = config
            .analysis_config(&key)
            .and_then(|cfg| Ok((cfg, lookforward_ratios(losses, &cfg)?)));
        for cell in &cells[i..j] {
            let stat = ratios.as_ref().ok().and_then(|(cfg, ratios)| {
                let mut logr = Vec::new();
                let mut ratio = Vec::new();
                let mut vol = Vec::new();
                for pt in ratios.usable() {
                    let window = &losses[pt.anchor - cfg.denominator_len..pt.anchor];
                    vol.push(sample_volatility(window, cell.kind).ok()?);
                    logr.push(pt.log_ratio?);
                    ratio.push(pt.ratio);
                }
                Some((pearson(&logr, &vol).ok()?, spearman(&ratio, &vol).ok()?))
            });
            out.push(stat.unwrap_or((f64::NAN, f64::NAN)));
        }
        i = j;
    }
    out
}

fn theory_for(config: &McConfig, key: &CellKey) -> (Option<f64>, bool) {
    let Some(law) = config.generator.law() else {
        return (None, false);
    };
    if !law.supports(key.kind) {
        return (None, true);
    }
    if key.p != 0.0 {
        return (None, false);
    }
    let r = log_ratio_volatility_correlation(
        law,
        key.alpha,
        key.kind,
        key.t_years * config.year_len,
        config.year_len,
    )
    .ok();
    (r, false)
}

fn rolling_cells<E: Executor>(config: &McConfig, stream_base: u64, exec: &E) -> Result<Vec<McCell>> {
    let cells = config.cells();
    let per_rep: Vec<Result<Vec<(f64, f64)>>> = exec.map_indexed(config.replications, |rep| {
        let mut rng = replication_rng(config.master_seed, stream_base + rep as u64);
        let returns = config
            .generator
            .sample_path(config.path_length, config.burn_in, &mut rng)?;
        let losses: Vec<f64> = returns.iter().map(|x| -x).collect();
        Ok(analyze_path(&losses, config, &cells))
    });
    let per_rep: Vec<Vec<(f64, f64)>> = per_rep.into_iter().collect::<Result<_>>()?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(c, key)| {
            let pearson_values: Vec<f64> = per_rep.iter().map(|r| r[c].0).collect();
            let spearman_values: Vec<f64> = per_rep.iter().map(|r| r[c].1).collect();
            let failures = pearson_values.iter().filter(|v| !v.is_finite()).count();
            let (theory, no_theoretical_counterpart) = theory_for(config, key);
            McCell {
                key: *key,
                pearson: Summary::of(&pearson_values),
                spearman: Summary::of(&spearman_values),
                pearson_significance: significance(&pearson_values),
                spearman_significance: significance(&spearman_values),
                theory,
                no_theoretical_counterpart,
                pearson_values,
                spearman_values,
                failures,
            }
        })
        .collect())
}

fn disjoint_cells<E: Executor>(config: &McConfig, exec: &E) -> Result<Vec<McCell>> {
    let cells = config.cells();
    // Per replication and cell: (ln(future / past), ratio, volatility).
    type Triple = Option<(f64, f64, f64)>;
    let per_rep: Vec<Result<Vec<Triple>>> = exec.map_indexed(config.replications, |rep| {
        let mut rng = replication_rng(config.master_seed, rep as u64);
        let longest = config.t_years.iter().max().copied().unwrap_or(1);
        let returns = config
            .generator
            .sample_path((longest + 1) * config.year_len, 0, &mut rng)?;
        let losses: Vec<f64> = returns.iter().map(|x| -x).collect();
        Ok(cells
            .iter()
            .map(|key| {
                let den_len = key.t_years * config.year_len;
                let past = &losses[..den_len];
                let future = &losses[den_len..den_len + config.year_len];
                let den = weighted_quantile(past, key.alpha, key.p).ok()?;
                let num = empirical_quantile(future, key.alpha).ok()?;
                let ratio = num / den;
                if !(ratio > 0.0 && ratio.is_finite()) {
                    return None;
                }
                Some((ln(ratio), ratio, sample_volatility(past, key.kind).ok()?))
            })
            .collect())
    });
    let per_rep: Vec<Vec<Option<(f64, f64, f64)>>> = per_rep.into_iter().collect::<Result<_>>()?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(c, key)| {
            let triples: Vec<(f64, f64, f64)> = per_rep.iter().filter_map(|r| r[c]).collect();
            let failures = per_rep.len() - triples.len();
            let logr: Vec<f64> = triples.iter().map(|t| t.0).collect();
            let ratio: Vec<f64> = triples.iter().map(|t| t.1).collect();
            let vol: Vec<f64> = triples.iter().map(|t| t.2).collect();
            let rp = pearson(&logr, &vol).unwrap_or(f64::NAN);
            let rs = spearman(&ratio, &vol).unwrap_or(f64::NAN);
            let (theory, no_theoretical_counterpart) = theory_for(config, key);
            McCell {
                key: *key,
                pearson: Summary::of(&[rp]),
                spearman: Summary::of(&[rs]),
                pearson_significance: pooled_significance(rp, triples.len()),
                spearman_significance: pooled_significance(rs, triples.len()),
                theory,
                no_theoretical_counterpart,
                pearson_values: alloc::vec![rp],
                spearman_values: alloc::vec![rs],
                failures,
            }
        })
        .collect())
}

/// Correlation study on iid paths.
pub fn run_iid_experiment<E: Executor>(config: &McConfig, exec: &E) -> Result<McResult> {
    if config.generator.law().is_none() {
        return Err(Error::InvalidParameter {
            name: "generator",
            reason: "the iid experiment needs a normal or Student generator",
        });
    }
    config.validate()?;
    let cells = match config.pairing {
        IidPairing::Rolling => rolling_cells(config, 0, exec)?,
        IidPairing::DisjointTriple => disjoint_cells(config, exec)?,
    };
    Ok(McResult {
        config: config.clone(),
        cells,
    })
}

/// One calibrated model in a GARCH experiment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GarchSet {
    pub label: String,
    pub params: GarchParams,
    /// Simulated path length; the config's `path_length` when `None`.
    pub path_length: Option<usize>,
}

/// Per-cell summary of the per-set means.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AcrossSets {
    pub key: CellKey,
    pub pearson: Summary,
    pub spearman: Summary,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GarchExperimentResult {
    pub sets: Vec<(String, McResult)>,
    pub across: Vec<AcrossSets>,
}

/// Simulates each model `replications` times and runs the monthly rolling
/// pipeline on every path. The generator in `config` is ignored.
pub fn run_garch_experiment<E: Executor>(
    sets: &[GarchSet],
    config: &McConfig,
    exec: &E,
) -> Result<GarchExperimentResult> {
    if sets.is_empty() {
        return Err(Error::InvalidParameter {
            name: "sets",
            reason: "at least one parameter set is required",
        });
    }
    let mut results = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let mut cfg = config.clone();
        cfg.generator = Generator::Garch { params: set.params };
        cfg.pairing = IidPairing::Rolling;
        if let Some(n) = set.path_length {
            cfg.path_length = n;
        }
        cfg.validate()?;
        let cells = rolling_cells(&cfg, (i as u64) << 32, exec)?;
        results.push((set.label.clone(), McResult { config: cfg, cells }));
    }
    let across = results[0]
        .1
        .cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let pm: Vec<f64> = results.iter().map(|(_, r)| r.cells[c].pearson.mean).collect();
            let sm: Vec<f64> = results.iter().map(|(_, r)| r.cells[c].spearman.mean).collect();
            AcrossSets {
                key: cell.key,
                pearson: Summary::of(&pm),
                spearman: Summary::of(&sm),
            }
        })
        .collect();
    Ok(GarchExperimentResult {
        sets: results,
        across,
    })
}

/// `100 * sqrt(252) * std` of each simulated path, summarized over
/// replications.
pub fn simulated_volatility<E: Executor>(
    params: &GarchParams,
    path_length: usize,
    replications: usize,
    master_seed: u64,
    exec: &E,
) -> Result<Summary> {
    if !params.is_stationary() {
        return Err(Error::NonStationary(params.persistence()));
    }
    if path_length < 2 || replications == 0 {
        return Err(Error::InvalidParameter {
            name: "path_length",
            reason: "need at least 2 observations and 1 replication",
        });
    }
    let vols: Vec<Result<f64>> = exec.map_indexed(replications, |rep| {
        let mut rng = replication_rng(master_seed, rep as u64);
        let path = simulate_with_rng(params, path_length, SimulationOptions::default(), &mut rng)?;
        Ok(crate::garch::annualized_volatility_pct(&path.returns))
    });
    let vols: Vec<f64> = vols.into_iter().collect::<Result<_>>()?;
    Ok(Summary::of(&vols))
}
