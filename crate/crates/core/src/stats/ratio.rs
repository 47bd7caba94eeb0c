use alloc::vec::Vec;

use super::{
    bin_ratios_by_volatility, pearson, regress_logratio_on_volatility, rmse, spearman, BinReport,
    RegressionResult,
};
use crate::math::ln;
use crate::quantile::{check_alpha, empirical_quantile, weighted_quantile};
use crate::series::{Frequency, LossSeries};
use crate::volatility::{annualize, sample_volatility, VolatilityKind};
use crate::{Error, Result, MONTH_DAYS, YEAR_DAYS};

/// Parameters of the look-forward ratio analysis.
///
/// The denominator is the `(p, alpha)` weighted quantile over the
/// `denominator_len` observations before the anchor; the numerator is always
/// the plain empirical quantile over the `numerator_len` observations from
/// the anchor on. Volatility is measured on the denominator window.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisConfig {
    pub p: f64,
    pub alpha: f64,
    pub t_years: usize,
    pub kind: VolatilityKind,
    pub denominator_len: usize,
    pub numerator_len: usize,
    pub step: usize,
}

impl AnalysisConfig {
    /// Daily data: one year is 252 observations, anchors step monthly (21).
    pub fn new(p: f64, alpha: f64, t_years: usize, kind: VolatilityKind) -> Result<Self> {
        Self::with_lengths(p, alpha, t_years, kind, YEAR_DAYS, MONTH_DAYS)
    }

    /// Same, with the year length taken from `frequency` (52 for weekly data)
    /// and the step set to a twelfth of a year, rounded, at least 1.
    pub fn for_frequency(
        p: f64,
        alpha: f64,
        t_years: usize,
        kind: VolatilityKind,
        frequency: Frequency,
    ) -> Result<Self> {
        let year = frequency.per_year();
        let step = ((year + 6) / 12).max(1);
        Self::with_lengths(p, alpha, t_years, kind, year, step)
    }

    pub fn with_lengths(
        p: f64,
        alpha: f64,
        t_years: usize,
        kind: VolatilityKind,
        year_len: usize,
        step: usize,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::NegativeExponent(p));
        }
        if t_years == 0 {
            return Err(Error::InvalidWindow("T must be at least one year"));
        }
        if year_len < 2 {
            return Err(Error::InvalidWindow("a year must hold at least 2 observations"));
        }
        if step == 0 {
            return Err(Error::InvalidWindow("step must be positive"));
        }
        Ok(Self {
            p,
            alpha,
            t_years,
            kind,
            denominator_len: year_len * t_years,
            numerator_len: year_len,
            step,
        })
    }

    pub fn with_step(mut self, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidWindow("step must be positive"));
        }
        self.step = step;
        Ok(self)
    }

    /// Anchors `t` with `[t - denominator_len, t + numerator_len)` inside a
    /// series of `len` observations.
    pub fn anchors(&self, len: usize) -> impl Iterator<Item = usize> {
        let first = self.denominator_len;
        let last = len.checked_sub(self.numerator_len);
        let step = self.step;
        (first..=last.unwrap_or(0)).step_by(step).filter(move |_| last.is_some())
    }

    pub fn anchor_count(&self, len: usize) -> usize {
        match len.checked_sub(self.denominator_len + self.numerator_len) {
            Some(extra) => 1 + extra / self.step,
            None => 0,
        }
    }

    pub fn required_len(&self) -> usize {
        self.denominator_len + self.numerator_len
    }
}

/// Look-forward ratio at one anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioPoint {
    pub anchor: usize,
    /// Empirical quantile over `[t, t + numerator_len)`.
    pub numerator: f64,
    /// Weighted quantile over `[t - denominator_len, t)`.
    pub denominator: f64,
    pub ratio: f64,
    /// `ln(ratio)` when the ratio is finite and positive.
    pub log_ratio: Option<f64>,
}

impl RatioPoint {
    fn new(anchor: usize, numerator: f64, denominator: f64) -> Self {
        let ratio = numerator / denominator;
        let log_ratio = (ratio > 0.0 && ratio.is_finite()).then(|| ln(ratio));
        Self {
            anchor,
            numerator,
            denominator,
            ratio,
            log_ratio,
        }
    }

    /// `Some(true)` when the past estimate under-estimated the realized risk
    /// (ratio above 1), `Some(false)` when it over-estimated it.
    pub fn underestimated(&self) -> Option<bool> {
        self.log_ratio.and_then(|l| {
            if l > 0.0 {
                Some(true)
            } else if l < 0.0 {
                Some(false)
            } else {
                None
            }
        })
    }
}

/// Ratio points plus the number of points without a log-ratio.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioSeries {
    pub points: Vec<RatioPoint>,
    pub excluded: usize,
}

impl RatioSeries {
    pub fn usable(&self) -> impl Iterator<Item = &RatioPoint> {
        self.points.iter().filter(|p| p.log_ratio.is_some())
    }
}

fn check_len(len: usize, config: &AnalysisConfig) -> Result<()> {
    if len < config.required_len() {
        return Err(Error::TooShort {
            needed: config.required_len(),
            got: len,
        });
    }
    Ok(())
}

pub fn lookforward_ratios(losses: &[f64], config: &AnalysisConfig) -> Result<RatioSeries> {
    check_len(losses.len(), config)?;
    let mut points = Vec::with_capacity(config.anchor_count(losses.len()));
    let mut excluded = 0;
    for t in config.anchors(losses.len()) {
        let den = weighted_quantile(&losses[t - config.denominator_len..t], config.alpha, config.p)?;
        let num = empirical_quantile(&losses[t..t + config.numerator_len], config.alpha)?;
        let point = RatioPoint::new(t, num, den);
        if point.log_ratio.is_none() {
            excluded += 1;
        }
        points.push(point);
    }
    Ok(RatioSeries { points, excluded })
}

/// One usable anchor of the ratio/volatility analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisPair {
    pub anchor: usize,
    pub ratio: f64,
    pub log_ratio: f64,
    /// `sqrt(n) * V_{k,n}` over `[anchor - n, anchor)`, `n = denominator_len`.
    pub volatility: f64,
}

impl AnalysisPair {
    /// Index range shared by the ratio denominator and the volatility.
    pub fn past_window(&self, config: &AnalysisConfig) -> core::ops::Range<usize> {
        self.anchor - config.denominator_len..self.anchor
    }
}

/// Ratio/volatility pairs without the summary statistics.
pub fn ratio_volatility_pairs(
    losses: &[f64],
    config: &AnalysisConfig,
) -> Result<(Vec<AnalysisPair>, usize)> {
    let ratios = lookforward_ratios(losses, config)?;
    let mut pairs = Vec::with_capacity(ratios.points.len() - ratios.excluded);
    for point in ratios.usable() {
        // MAD and std are invariant under negation, so losses give the same
        // volatility as returns.
        let raw = sample_volatility(&losses[point.anchor - config.denominator_len..point.anchor], config.kind)?;
        pairs.push(AnalysisPair {
            anchor: point.anchor,
            ratio: point.ratio,
            log_ratio: point.log_ratio.unwrap_or(f64::NAN),
            volatility: annualize(raw, config.denominator_len)?,
        });
    }
    Ok((pairs, ratios.excluded))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisReport {
    pub config: AnalysisConfig,
    pub pairs: Vec<AnalysisPair>,
    pub excluded: usize,
    /// Pearson correlation of log-ratio and volatility.
    pub pearson: f64,
    /// Spearman correlation of ratio and volatility.
    pub spearman: f64,
    pub rmse: f64,
    pub regression: RegressionResult,
    /// Binnings for 5 and 10 bins, where there are enough points.
    pub bins: Vec<BinReport>,
}

pub fn correlate_ratio_volatility(losses: &[f64], config: &AnalysisConfig) -> Result<AnalysisReport> {
    let (pairs, excluded) = ratio_volatility_pairs(losses, config)?;
    if pairs.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: pairs.len(),
        });
    }
    let logr: Vec<f64> = pairs.iter().map(|p| p.log_ratio).collect();
    let ratio: Vec<f64> = pairs.iter().map(|p| p.ratio).collect();
    let vol: Vec<f64> = pairs.iter().map(|p| p.volatility).collect();
    let by_vol: Vec<(f64, f64)> = ratio.iter().copied().zip(vol.iter().copied()).collect();
    let bins = [5, 10]
        .into_iter()
        .filter_map(|n| bin_ratios_by_volatility(&by_vol, n).ok())
        .collect();
    Ok(AnalysisReport {
        config: *config,
        pearson: pearson(&logr, &vol)?,
        spearman: spearman(&ratio, &vol)?,
        rmse: rmse(&ratio)?,
        regression: regress_logratio_on_volatility(&vol, &logr)?,
        bins,
        pairs,
        excluded,
    })
}

impl AnalysisReport {
    pub fn from_losses<D>(losses: &LossSeries<D>, config: &AnalysisConfig) -> Result<Self> {
        correlate_ratio_volatility(losses.values(), config)
    }
}
