//! Realized volatility `V_{k,n} = { (1/(n-1)) sum |X_i - mean|^k }^{1/k}` for
//! `k = 1` (mean absolute deviation) and `k = 2` (standard deviation), and its
//! `sqrt(n)` annualization.

use alloc::vec::Vec;

use crate::math::{abs, mean, sqrt};
use crate::series::{rolling_windows, ReturnSeries, WindowSpec};
use crate::{Error, Result};

/// Deviation exponent `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "u8", into = "u8"))]
pub enum VolatilityKind {
    /// `k = 1`
    Mad,
    /// `k = 2`
    Std,
}

impl VolatilityKind {
    pub fn k(self) -> u8 {
        match self {
            VolatilityKind::Mad => 1,
            VolatilityKind::Std => 2,
        }
    }

    pub fn from_k(k: u8) -> Result<Self> {
        match k {
            1 => Ok(VolatilityKind::Mad),
            2 => Ok(VolatilityKind::Std),
            _ => Err(Error::InvalidParameter {
                name: "k",
                reason: "must be 1 (MAD) or 2 (std)",
            }),
        }
    }
}

impl TryFrom<u8> for VolatilityKind {
    type Error = Error;
    fn try_from(k: u8) -> Result<Self> {
        Self::from_k(k)
    }
}

impl From<VolatilityKind> for u8 {
    fn from(k: VolatilityKind) -> u8 {
        k.k()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VolatilityEstimate {
    pub anchor: usize,
    pub kind: VolatilityKind,
    /// Per-observation deviation `V_{k,n}`.
    pub raw: f64,
    /// `sqrt(n) * raw`.
    pub annualized: f64,
    pub n: usize,
}

pub fn sample_volatility(window: &[f64], kind: VolatilityKind) -> Result<f64> {
    let n = window.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let m = mean(window);
    let denom = (n - 1) as f64;
    Ok(match kind {
        VolatilityKind::Mad => window.iter().map(|x| abs(x - m)).sum::<f64>() / denom,
        VolatilityKind::Std => sqrt(window.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / denom),
    })
}

pub fn annualize(raw: f64, n: usize) -> Result<f64> {
    if !(raw >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "raw",
            reason: "volatility must be non-negative",
        });
    }
    Ok(sqrt(n as f64) * raw)
}

pub fn volatility_series<D>(
    returns: &ReturnSeries<D>,
    kind: VolatilityKind,
    spec: WindowSpec,
) -> Result<Vec<VolatilityEstimate>> {
    volatility_values(returns.values(), kind, spec)
}

pub fn volatility_values(
    returns: &[f64],
    kind: VolatilityKind,
    spec: WindowSpec,
) -> Result<Vec<VolatilityEstimate>> {
    rolling_windows(returns.len(), spec)?
        .map(|w| {
            let raw = sample_volatility(&returns[w.range()], kind)?;
            Ok(VolatilityEstimate {
                anchor: w.anchor,
                kind,
                raw,
                annualized: annualize(raw, spec.length())?,
                n: spec.length(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hand_examples() {
        assert_eq!(sample_volatility(&[1.0, 2.0, 3.0], VolatilityKind::Mad).unwrap(), 1.0);
        assert_eq!(sample_volatility(&[1.0, 2.0, 3.0], VolatilityKind::Std).unwrap(), 1.0);
        for kind in [VolatilityKind::Mad, VolatilityKind::Std] {
            assert_eq!(sample_volatility(&[0.3; 9], kind).unwrap(), 0.0);
        }
        assert!(sample_volatility(&[1.0], VolatilityKind::Mad).is_err());
    }

    #[test]
    fn annualization() {
        assert_eq!(annualize(0.0, 252).unwrap(), 0.0);
        assert_eq!(annualize(1.0, 1).unwrap(), 1.0);
        // sqrt(252) * 0.01 = 0.158745078663875...
        assert!((annualize(0.01, 252).unwrap() - 0.158_745_078_663_875_43).abs() < 1e-15);
        assert!(annualize(-1e-3, 252).is_err());
    }

    #[test]
    fn rolling_series() {
        let r = ReturnSeries::from_values(vec![0.001; 504]);
        let spec = WindowSpec::new(252, 21).unwrap();
        let v = volatility_series(&r, VolatilityKind::Mad, spec).unwrap();
        assert_eq!(v.len(), 13);
        assert!(v.iter().all(|e| e.annualized == 0.0));
    }

    #[test]
    fn k_round_trip() {
        assert_eq!(VolatilityKind::from_k(2).unwrap(), VolatilityKind::Std);
        assert!(VolatilityKind::from_k(3).is_err());
    }
}
