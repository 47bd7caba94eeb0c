//! Large-sample correlations for iid returns.
//!
//! For an iid sample the empirical quantile and the realized volatility are
//! asymptotically jointly normal. Their correlation follows from the
//! influence functions of the two estimators and depends only on the law of
//! the returns, `alpha` and `k`. Because the look-forward numerator is built
//! from a disjoint window, the correlation between the log-ratio and the
//! volatility is `-rho / sqrt(1 + n_den / n_num)`.

use crate::math::sqrt;
use crate::special::{normal_pdf, normal_quantile, student_pdf, student_quantile};
use crate::volatility::VolatilityKind;
use crate::{Error, Result};

/// Symmetric return law (scale is irrelevant to correlations).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Law {
    Gaussian,
    Student(f64),
}

impl Law {
    fn quantile(self, alpha: f64) -> f64 {
        match self {
            Law::Gaussian => normal_quantile(alpha),
            Law::Student(nu) => student_quantile(alpha, nu),
        }
    }

    /// `E[X 1{X > a}]` for `a >= 0`.
    fn upper_first_moment(self, a: f64) -> f64 {
        match self {
            Law::Gaussian => normal_pdf(a),
            Law::Student(nu) => (nu + a * a) * student_pdf(a, nu) / (nu - 1.0),
        }
    }

    fn variance(self) -> f64 {
        match self {
            Law::Gaussian => 1.0,
            Law::Student(nu) => nu / (nu - 2.0),
        }
    }

    fn fourth_moment(self) -> f64 {
        match self {
            Law::Gaussian => 3.0,
            Law::Student(nu) => 3.0 * nu * nu / ((nu - 2.0) * (nu - 4.0)),
        }
    }

    /// `E[X^2 1{X > q}]`, where `q` is the `alpha` quantile.
    fn upper_second_moment(self, q: f64, alpha: f64) -> f64 {
        match self {
            Law::Gaussian => q * normal_pdf(q) + 1.0 - alpha,
            Law::Student(nu) => {
                let g = (nu + q * q) * student_pdf(q, nu) / (nu - 1.0);
                ((nu - 1.0) * q * g + nu * (1.0 - alpha)) / (nu - 2.0)
            }
        }
    }

    /// Whether the correlation exists: a finite variance of the volatility
    /// estimator needs two moments for MAD and four for the std.
    pub fn supports(self, kind: VolatilityKind) -> bool {
        match (self, kind) {
            (Law::Gaussian, _) => true,
            (Law::Student(nu), VolatilityKind::Mad) => nu > 2.0,
            (Law::Student(nu), VolatilityKind::Std) => nu > 4.0,
        }
    }
}

/// Asymptotic correlation between the empirical `alpha` quantile and the
/// `k`-volatility computed on the same iid sample.
pub fn quantile_volatility_correlation(law: Law, alpha: f64, kind: VolatilityKind) -> Result<f64> {
    crate::quantile::check_alpha(alpha)?;
    if let Law::Student(nu) = law {
        if !(nu > 0.0) || !law.supports(kind) {
            return Err(Error::InvalidDegreesOfFreedom(nu));
        }
    }
    let q = law.quantile(alpha);
    let sd_indicator = sqrt(alpha * (1.0 - alpha));
    let var = law.variance();
    Ok(match kind {
        VolatilityKind::Mad => {
            let delta = 2.0 * law.upper_first_moment(0.0);
            let tail_abs = if q >= 0.0 {
                law.upper_first_moment(q)
            } else {
                delta - law.upper_first_moment(-q)
            };
            (tail_abs - (1.0 - alpha) * delta) / (sd_indicator * sqrt(var - delta * delta))
        }
        VolatilityKind::Std => {
            let tail_sq = law.upper_second_moment(q, alpha);
            (tail_sq - (1.0 - alpha) * var) / (sd_indicator * sqrt(law.fourth_moment() - var * var))
        }
    })
}

/// Asymptotic correlation between `ln(R)` and the volatility when the
/// denominator and volatility use `denominator_len` observations and the
/// numerator an independent `numerator_len`.
pub fn log_ratio_volatility_correlation(
    law: Law,
    alpha: f64,
    kind: VolatilityKind,
    denominator_len: usize,
    numerator_len: usize,
) -> Result<f64> {
    if denominator_len == 0 || numerator_len == 0 {
        return Err(Error::InvalidWindow("window lengths must be positive"));
    }
    let rho = quantile_volatility_correlation(law, alpha, kind)?;
    Ok(-rho / sqrt(1.0 + denominator_len as f64 / numerator_len as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use VolatilityKind::{Mad, Std};

    // Oracle: 30-digit mpmath quadrature of the moment expressions against the
    // density, with the quantile found by root search on the CDF.
    const CASES: [(Law, f64, VolatilityKind, f64); 14] = [
        (Law::Gaussian, 0.95, Mad, 0.481_364_556_108_795_47),
        (Law::Gaussian, 0.95, Std, 0.550_394_675_171_676_65),
        (Law::Gaussian, 0.99, Mad, 0.311_331_276_068_534_23),
        (Law::Gaussian, 0.99, Std, 0.440_630_124_126_301_96),
        (Law::Gaussian, 0.3, Mad, -0.392_145_655_923_384_76),
        (Law::Gaussian, 0.3, Std, -0.281_341_583_680_567_91),
        (Law::Student(3.0), 0.95, Mad, 0.476_036_338_186_455_34),
        (Law::Student(3.0), 0.99, Mad, 0.443_966_775_928_453_12),
        (Law::Student(3.0), 0.3, Mad, -0.268_229_628_993_806_09),
        (Law::Student(5.0), 0.95, Std, 0.377_894_776_639_294_03),
        (Law::Student(5.0), 0.99, Mad, 0.402_299_657_367_203_86),
        (Law::Student(5.0), 0.3, Std, -0.145_108_000_972_680_82),
        (Law::Student(10.0), 0.99, Std, 0.485_428_688_580_819_3),
        (Law::Student(10.0), 0.3, Mad, -0.370_111_139_560_769_18),
    ];

    #[test]
    fn matches_numerical_integration() {
        for (law, alpha, kind, expected) in CASES {
            let got = quantile_volatility_correlation(law, alpha, kind).unwrap();
            assert!((got - expected).abs() < 1e-12, "{law:?} {alpha} {kind:?}: {got} vs {expected}");
        }
    }

    #[test]
    fn log_ratio_factor() {
        let r = log_ratio_volatility_correlation(Law::Gaussian, 0.95, Mad, 252, 252).unwrap();
        assert!((r + 0.340_376_141_847_381_7).abs() < 1e-9);
        let r3 = log_ratio_volatility_correlation(Law::Gaussian, 0.95, Mad, 756, 252).unwrap();
        assert!((r3 / r - (2.0f64 / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unsupported_tails() {
        assert!(quantile_volatility_correlation(Law::Student(3.0), 0.99, Std).is_err());
        assert!(quantile_volatility_correlation(Law::Student(2.0), 0.99, Mad).is_err());
        assert!(!Law::Student(4.0).supports(Std));
    }
}
