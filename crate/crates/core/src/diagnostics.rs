//! Checks that GARCH residuals behave like an iid sample: moments, the
//! autocorrelation of their absolute values, and whether their
//! ratio/volatility correlation falls inside the confidence intervals implied
//! by iid theory.

use alloc::vec::Vec;

use crate::math::{ceil, mean, sample_variance, sqrt};
use crate::stats::{acf, bartlett_effective_size, fisher_ci, pearson, ratio_volatility_pairs, Acf, AnalysisConfig};
use crate::theory::{log_ratio_volatility_correlation, Law};
use crate::volatility::VolatilityKind;
use crate::{Error, Result};

/// Thresholds scanned by the residual correlation check.
pub const CHECK_ALPHAS: [f64; 4] = [0.95, 0.975, 0.99, 0.995];

/// Candidate iid laws: Gaussian and Student with 4 to 7 degrees of freedom.
pub const CANDIDATE_LAWS: [Law; 5] = [
    Law::Gaussian,
    Law::Student(4.0),
    Law::Student(5.0),
    Law::Student(6.0),
    Law::Student(7.0),
];

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

pub fn moments(values: &[f64]) -> Result<Moments> {
    if values.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: values.len(),
        });
    }
    Ok(Moments {
        mean: mean(values),
        sd: sqrt(sample_variance(values)),
        n: values.len(),
    })
}

/// Autocorrelation of `|x|`.
pub fn abs_acf(values: &[f64], max_lag: usize) -> Result<Acf> {
    let abs: Vec<f64> = values.iter().map(|x| x.abs()).collect();
    acf(&abs, max_lag)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LawInterval {
    pub law: Law,
    /// Large-sample correlation under the law.
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationCheck {
    pub alpha: f64,
    /// Pearson correlation of the log-ratio and MAD on the series.
    pub observed: f64,
    pub n_pairs: usize,
    /// Pair count corrected for the overlap of neighbouring windows.
    pub effective_n: f64,
    pub intervals: Vec<LawInterval>,
    /// The observed value lies in at least one interval.
    pub contained: bool,
}

/// Compares the ratio/MAD correlation of `values` (treated as returns, one
/// year windows, monthly anchors, `p = 0`) with iid confidence intervals at
/// `level` for each law in `laws`.
///
/// Rolling anchors overlap, so the intervals use the effective sample size
/// `n / (1 + 2 sum r_x(k) r_y(k))` over lags up to one window length in
/// anchor steps, not the raw number of pairs.
pub fn correlation_check(values: &[f64], alpha: f64, laws: &[Law], level: f64) -> Result<CorrelationCheck> {
    let cfg = AnalysisConfig::new(0.0, alpha, 1, VolatilityKind::Mad)?;
    let losses: Vec<f64> = values.iter().map(|x| -x).collect();
    let (pairs, _) = ratio_volatility_pairs(&losses, &cfg)?;
    let logr: Vec<f64> = pairs.iter().map(|p| p.log_ratio).collect();
    let vol: Vec<f64> = pairs.iter().map(|p| p.volatility).collect();
    let observed = pearson(&logr, &vol)?;
    let max_lag = ceil(cfg.denominator_len as f64 / cfg.step as f64) as usize;
    let effective_n = bartlett_effective_size(&logr, &vol, max_lag)?;
    let mut intervals = Vec::with_capacity(laws.len());
    for &law in laws {
        let center = log_ratio_volatility_correlation(law, alpha, VolatilityKind::Mad, cfg.denominator_len, cfg.numerator_len)?;
        let (lo, hi) = fisher_ci(center, effective_n, level)?;
        intervals.push(LawInterval { law, center, lo, hi });
    }
    let contained = intervals.iter().any(|i| i.lo <= observed && observed <= i.hi);
    Ok(CorrelationCheck {
        alpha,
        observed,
        n_pairs: pairs.len(),
        effective_n,
        intervals,
        contained,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualReport {
    pub moments: Moments,
    pub abs_acf: Acf,
    pub checks: Vec<CorrelationCheck>,
}

/// Moments, `|x|` ACF up to `max_lag`, and the correlation check at each of
/// [`CHECK_ALPHAS`] against [`CANDIDATE_LAWS`] at 95%.
pub fn residual_report(values: &[f64], max_lag: usize) -> Result<ResidualReport> {
    Ok(ResidualReport {
        moments: moments(values)?,
        abs_acf: abs_acf(values, max_lag)?,
        checks: CHECK_ALPHAS
            .iter()
            .map(|&a| correlation_check(values, a, &CANDIDATE_LAWS, 0.95))
            .collect::<Result<_>>()?,
    })
}
