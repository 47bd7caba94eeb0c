//! Empirical (order-statistic) quantiles and the `|L|^p`-weighted sample
//! quantile process.
//!
//! Quantiles are never interpolated: the value returned is always an element
//! of the sample, namely `inf { x : F(x) >= alpha }` for the (weighted)
//! empirical distribution function `F`.

use alloc::vec::Vec;

use crate::math::powf;
use crate::series::{rolling_windows, LossSeries, WindowSpec};
use crate::{Error, Result};

/// Parameters of a rolling sample quantile process.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SqpConfig {
    p: f64,
    alpha: f64,
    window: WindowSpec,
}

impl SqpConfig {
    pub fn new(p: f64, alpha: f64, window: WindowSpec) -> Result<Self> {
        check_alpha(alpha)?;
        check_exponent(p)?;
        Ok(Self { p, alpha, window })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn window(&self) -> WindowSpec {
        self.window
    }
}

/// One point of a sample quantile process. `anchor` is the index of the first
/// observation after the window.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantileEstimate {
    pub anchor: usize,
    pub value: f64,
    pub config: SqpConfig,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeExponent(p))
    }
}

/// 1-based rank `k` of the order statistic returned by the empirical quantile:
/// the smallest `k` with `k / n >= alpha`.
pub fn order_statistic_rank(n: usize, alpha: f64) -> usize {
    let nf = n as f64;
    let mut k = crate::math::ceil(nf * alpha) as usize;
    k = k.clamp(1, n);
    // Settle rounding in n * alpha against the defining inequality itself.
    while k > 1 && ((k - 1) as f64) / nf >= alpha {
        k -= 1;
    }
    while k < n && (k as f64) / nf < alpha {
        k += 1;
    }
    k
}

/// The `ceil(n * alpha)`-th order statistic of `sample`.
pub fn empirical_quantile(sample: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let k = order_statistic_rank(sample.len(), alpha);
    let mut buf = sample.to_vec();
    let (_, kth, _) = buf.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*kth)
}

/// `inf { x : sum_{L_i <= x} |L_i|^p / sum |L_i|^p >= alpha }`.
///
/// Tied sample values contribute their whole weight before the threshold is
/// tested. `p = 0` reproduces [`empirical_quantile`] exactly.
pub fn weighted_quantile(sample: &[f64], alpha: f64, p: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_exponent(p)?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if p == 0.0 {
        return empirical_quantile(sample, alpha);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    weighted_quantile_sorted(&sorted, alpha, p)
}

fn weighted_quantile_sorted(sorted: &[f64], alpha: f64, p: f64) -> Result<f64> {
    let weights: Vec<f64> = sorted.iter().map(|x| powf(crate::math::abs(*x), p)).collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::ZeroWeightMass(p));
    }
    let mut cum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let value = sorted[i];
        while i < sorted.len() && sorted[i] == value {
            cum += weights[i];
            i += 1;
        }
        if cum / total >= alpha {
            return Ok(value);
        }
    }
    // Rounding can leave cum / total a hair below 1; the maximum always qualifies.
    Ok(sorted[sorted.len() - 1])
}

/// Rolling SQP over `losses`, one estimate per window of `config.window()`.
pub fn sqp_series<D>(losses: &LossSeries<D>, config: &SqpConfig) -> Result<Vec<QuantileEstimate>> {
    sqp_values(losses.values(), config)
}

pub fn sqp_values(losses: &[f64], config: &SqpConfig) -> Result<Vec<QuantileEstimate>> {
    rolling_windows(losses.len(), config.window)?
        .map(|w| {
            Ok(QuantileEstimate {
                anchor: w.anchor,
                value: weighted_quantile(&losses[w.range()], config.alpha, config.p)?,
                config: *config,
            })
        })
        .collect()
}

/// Empirical quantile over the whole loss history.
pub fn unconditional_var<D>(losses: &LossSeries<D>, alpha: f64) -> Result<f64> {
    empirical_quantile(losses.values(), alpha)
}
