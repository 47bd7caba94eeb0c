use alloc::vec::Vec;

use crate::math::{mean, sqrt};
use crate::special::student_cdf;
use crate::{Error, Result};

/// Ordinary least squares fit of `log R = intercept + slope * v + e`.
///
/// `p_value` is the one-sided probability of a t statistic at least as
/// negative as the observed one under iid normal errors. Those assumptions
/// do not hold for overlapping rolling windows, so `indicative` is always set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegressionResult {
    pub intercept: f64,
    pub slope: f64,
    pub slope_se: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub residuals: Vec<f64>,
    pub indicative: bool,
}

/// Regresses `y` (log-ratios) on `x` (volatilities).
pub fn regress_logratio_on_volatility(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateRegressor);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| b - intercept - slope * a)
        .collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = (n - 2) as f64;
    let slope_se = sqrt(ssr / dof / sxx);
    let (t_stat, p_value) = if slope_se > 0.0 {
        let t = slope / slope_se;
        (t, student_cdf(t, dof))
    } else if slope < 0.0 {
        (f64::NEG_INFINITY, 0.0)
    } else if slope > 0.0 {
        (f64::INFINITY, 1.0)
    } else {
        (0.0, 0.5)
    };
    Ok(RegressionResult {
        intercept,
        slope,
        slope_se,
        t_stat,
        p_value,
        residuals,
        indicative: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..20).map(|i| 0.1 + 0.01 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 5.0 * v).collect();
        let r = regress_logratio_on_volatility(&x, &y).unwrap();
        assert!((r.slope + 5.0).abs() < 1e-12);
        assert!((r.intercept - 3.0).abs() < 1e-12);
        assert!(r.residuals.iter().all(|e| e.abs() < 1e-12));
        assert!(r.p_value < 1e-6);
        assert!(r.indicative);
    }

    #[test]
    fn textbook_values() {
        // numpy.polyfit / scipy.stats.linregress on this data:
        // slope 0.8, intercept 1.8, stderr 0.282842712474619
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.0, 4.0, 5.0, 4.0, 6.0];
        let r = regress_logratio_on_volatility(&x, &y).unwrap();
        assert!((r.slope - 0.8).abs() < 1e-12);
        assert!((r.intercept - 1.8).abs() < 1e-12);
        assert!((r.slope_se - 0.282_842_712_474_619).abs() < 1e-12);
        // scipy.stats.t.cdf(0.8 / 0.2828..., 3)
        assert!((r.p_value - 0.966_862_198_629_238).abs() < 1e-10);
    }

    #[test]
    fn degenerate_regressor() {
        assert_eq!(
            regress_logratio_on_volatility(&[1.0; 4], &[1.0, 2.0, 3.0, 4.0]),
            Err(Error::DegenerateRegressor)
        );
    }
}
