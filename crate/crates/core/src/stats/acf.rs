use alloc::vec::Vec;

use crate::math::{mean, sqrt};
use crate::{Error, Result};

/// Sample autocorrelations at lags `1..=max_lag` with the `+/- 1.96 / sqrt(N)`
/// whiteness band.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Acf {
    pub values: Vec<f64>,
    pub band: f64,
    pub n: usize,
}

impl Acf {
    /// Fraction of lags whose autocorrelation lies inside the band.
    pub fn fraction_inside_band(&self) -> f64 {
        let inside = self.values.iter().filter(|r| r.abs() <= self.band).count();
        inside as f64 / self.values.len() as f64
    }
}

pub fn acf(series: &[f64], max_lag: usize) -> Result<Acf> {
    let n = series.len();
    if max_lag == 0 {
        return Err(Error::InvalidParameter {
            name: "max_lag",
            reason: "must be positive",
        });
    }
    if n <= max_lag + 1 {
        return Err(Error::TooShort {
            needed: max_lag + 2,
            got: n,
        });
    }
    let m = mean(series);
    let dev: Vec<f64> = series.iter().map(|x| x - m).collect();
    let c0: f64 = dev.iter().map(|d| d * d).sum();
    if c0 == 0.0 {
        return Err(Error::ConstantInput);
    }
    let values = (1..=max_lag)
        .map(|k| dev[..n - k].iter().zip(&dev[k..]).map(|(a, b)| a * b).sum::<f64>() / c0)
        .collect();
    Ok(Acf {
        values,
        band: 1.96 / sqrt(n as f64),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_series() {
        let x: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let a = acf(&x, 2).unwrap();
        assert!((a.values[0] + 0.99).abs() < 1e-12);
        assert!((a.values[1] - 0.98).abs() < 1e-12);
        assert!((a.band - 0.196).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(acf(&[2.0; 10], 3), Err(Error::ConstantInput));
        assert!(matches!(acf(&[1.0, 2.0, 3.0], 2), Err(Error::TooShort { .. })));
        assert!(acf(&[1.0, 2.0, 3.0], 0).is_err());
    }
}
