//! Pro-cyclicality statistics: look-forward ratios of rolling quantiles,
//! their dependence on realized volatility, and the supporting correlation,
//! regression, binning and autocorrelation tools.

mod acf;
mod binning;
mod correlation;
mod ratio;
mod regression;

pub use acf::{acf, Acf};
pub use binning::{bin_ratios_by_volatility, Bin, BinReport};
pub use correlation::{
    bartlett_effective_size, fisher_ci, pearson, rank_average, rmse, spearman,
};
pub use ratio::{
    correlate_ratio_volatility, lookforward_ratios, ratio_volatility_pairs, AnalysisConfig,
    AnalysisPair, AnalysisReport, RatioPoint, RatioSeries,
};
pub use regression::{regress_logratio_on_volatility, RegressionResult};
