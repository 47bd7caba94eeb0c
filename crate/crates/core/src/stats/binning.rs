use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Arithmetic mean of the ratios in the bin; `None` for an empty bin.
    pub mean_ratio: Option<f64>,
}

/// Ratios grouped into uniform volatility bins over `[min v, max v]`.
/// Bins are left-closed and right-open except the last, which is closed.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinReport {
    pub n_bins: usize,
    pub edges: Vec<f64>,
    pub bins: Vec<Bin>,
}

impl BinReport {
    pub fn means(&self) -> Vec<Option<f64>> {
        self.bins.iter().map(|b| b.mean_ratio).collect()
    }

    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }
}

/// Bins `(ratio, volatility)` pairs by volatility.
pub fn bin_ratios_by_volatility(pairs: &[(f64, f64)], n_bins: usize) -> Result<BinReport> {
    if n_bins == 0 {
        return Err(Error::InvalidParameter {
            name: "n_bins",
            reason: "must be positive",
        });
    }
    if pairs.len() < n_bins {
        return Err(Error::TooFewPoints {
            needed: n_bins,
            got: pairs.len(),
        });
    }
    let (lo, hi) = pairs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
        (lo.min(v), hi.max(v))
    });
    if !(lo < hi) {
        return Err(Error::DegenerateRange);
    }
    let width = (hi - lo) / n_bins as f64;
    let mut edges: Vec<f64> = (0..=n_bins).map(|i| lo + width * i as f64).collect();
    edges[n_bins] = hi;

    let mut counts = alloc::vec![0usize; n_bins];
    let mut sums = alloc::vec![0.0f64; n_bins];
    for &(ratio, v) in pairs {
        let mut idx = (((v - lo) / width) as usize).min(n_bins - 1);
        // Settle floating-point disagreement with the stored edges.
        while idx > 0 && v < edges[idx] {
            idx -= 1;
        }
        while idx + 1 < n_bins && v >= edges[idx + 1] {
            idx += 1;
        }
        counts[idx] += 1;
        sums[idx] += ratio;
    }
    let bins = (0..n_bins)
        .map(|i| Bin {
            lo: edges[i],
            hi: edges[i + 1],
            count: counts[i],
            mean_ratio: (counts[i] > 0).then(|| sums[i] / counts[i] as f64),
        })
        .collect();
    Ok(BinReport {
        n_bins,
        edges,
        bins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_binning() {
        let pairs: Vec<(f64, f64)> = (1..=10).map(|v| (v as f64, v as f64)).collect();
        let r = bin_ratios_by_volatility(&pairs, 5).unwrap();
        let means: Vec<f64> = r.means().into_iter().map(Option::unwrap).collect();
        let expected = [1.5, 3.5, 5.5, 7.5, 9.5];
        for (m, e) in means.iter().zip(expected) {
            assert!((m - e).abs() < 1e-12);
        }
        assert_eq!(r.total(), 10);
        assert_eq!(r.edges.len(), 6);
    }

    #[test]
    fn unit_ratios() {
        let pairs: Vec<(f64, f64)> = (0..50).map(|i| (1.0, (i * i) as f64)).collect();
        let r = bin_ratios_by_volatility(&pairs, 10).unwrap();
        for b in &r.bins {
            if let Some(m) = b.mean_ratio {
                assert_eq!(m, 1.0);
            }
        }
        assert_eq!(r.total(), 50);
    }

    #[test]
    fn empty_bins_have_no_mean() {
        let pairs = [(1.0, 0.0), (2.0, 0.0), (3.0, 10.0), (4.0, 10.0), (5.0, 10.0)];
        let r = bin_ratios_by_volatility(&pairs, 5).unwrap();
        assert_eq!(r.bins[2].count, 0);
        assert_eq!(r.bins[2].mean_ratio, None);
        assert_eq!(r.bins[4].mean_ratio, Some(4.0));
    }

    #[test]
    fn errors() {
        assert_eq!(
            bin_ratios_by_volatility(&[(1.0, 2.0); 6], 5),
            Err(Error::DegenerateRange)
        );
        assert!(bin_ratios_by_volatility(&[(1.0, 2.0), (1.0, 3.0)], 5).is_err());
    }
}
