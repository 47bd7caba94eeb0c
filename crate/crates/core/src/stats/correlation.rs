use alloc::vec::Vec;

use crate::math::{atanh, sqrt, tanh};
use crate::special::normal_quantile;
use crate::{Error, Result};

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: x.len(),
        });
    }
    Ok(())
}

/// Product-moment correlation, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let mx = crate::math::mean(x);
    let my = crate::math::mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantInput);
    }
    Ok((sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing the average of their positions.
pub fn rank_average(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = alloc::vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Spearman rank correlation: Pearson on average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&rank_average(x), &rank_average(y))
}

/// Root mean squared distance of ratios from a perfect prediction of 1.
pub fn rmse(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(Error::EmptySample);
    }
    let ss: f64 = ratios.iter().map(|r| (r - 1.0) * (r - 1.0)).sum();
    Ok(sqrt(ss / ratios.len() as f64))
}

/// Fisher-transform confidence interval `tanh(atanh(r) +/- z / sqrt(n - 3))`
/// around a correlation `r` for sample size `n` (which may be an effective,
/// non-integer size).
pub fn fisher_ci(r: f64, n: f64, level: f64) -> Result<(f64, f64)> {
    if !(r > -1.0 && r < 1.0) {
        return Err(Error::InvalidCorrelation(r));
    }
    if !(n >= 4.0) {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: n as usize,
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level",
            reason: "must lie in (0, 1)",
        });
    }
    let z = normal_quantile(0.5 * (1.0 + level));
    let half = z / sqrt(n - 3.0);
    let center = atanh(r);
    Ok((tanh(center - half), tanh(center + half)))
}

/// Effective number of independent pairs behind a correlation of two
/// autocorrelated series: `n / (1 + 2 sum_{k=1}^{max_lag} r_x(k) r_y(k))`,
/// clamped to `[4, n]`.
pub fn bartlett_effective_size(x: &[f64], y: &[f64], max_lag: usize) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len();
    let max_lag = max_lag.min(n.saturating_sub(2));
    if max_lag == 0 {
        return Ok(n as f64);
    }
    let rx = super::acf(x, max_lag)?;
    let ry = super::acf(y, max_lag)?;
    let s: f64 = rx
        .values
        .iter()
        .zip(&ry.values)
        .map(|(a, b)| a * b)
        .sum();
    let eff = n as f64 / (1.0 + 2.0 * s);
    Ok(eff.clamp(4.0_f64.min(n as f64), n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(pearson(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::TooFewPoints { .. })));
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::ConstantInput));
    }

    #[test]
    fn spearman_monotone() {
        let x = [0.1, 0.5, 0.7, 2.0, 3.0];
        let up = [1.0, 2.0, 10.0, 11.0, 50.0];
        let down = [5.0, 4.0, 3.0, 2.0, -7.0];
        assert!((spearman(&x, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&x, &down).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn average_ranks_with_ties() {
        assert_eq!(rank_average(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn rmse_examples() {
        assert_eq!(rmse(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert!((rmse(&[1.5, 0.5]).unwrap() - 0.5).abs() < 1e-12);
        assert!((rmse(&[2.0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(rmse(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn fisher_examples() {
        // tanh(1.959963984540054 / 10) computed with mpmath.
        let (lo, hi) = fisher_ci(0.0, 103.0, 0.95).unwrap();
        assert!((hi - 0.193_524_664_791_679_94).abs() < 1e-12, "{hi}");
        assert!((lo + hi).abs() < 1e-15);
        let (lo, hi) = fisher_ci(-0.4, 50.0, 0.9).unwrap();
        assert!(lo < -0.4 && -0.4 < hi);
        assert!(fisher_ci(1.0, 10.0, 0.95).is_err());
        assert!(fisher_ci(0.1, 3.0, 0.95).is_err());
    }
}
