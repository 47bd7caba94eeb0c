//! Risk-measure dynamics toolkit: rolling weighted sample-quantile processes,
//! look-forward risk ratios, realized volatility conditioning, GARCH(1,1)
//! calibration and simulation, and the Monte Carlo experiments built on them.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! front end and the rayon-backed executor live in the `sqp-cli` crate.
//!
//! Module map:
//! - [`series`]: prices, log-returns, losses and the rolling-window calendar.
//! - [`quantile`]: empirical and `|L|^p`-weighted quantiles, SQP series.
//! - [`volatility`]: MAD / standard-deviation realized volatility.
//! - [`stats`]: look-forward ratios, correlations, regression, binning, ACF.
//! - [`garch`]: GARCH(1,1) simulation, fitting and residual filtering.
//! - [`montecarlo`]: iid and GARCH correlation experiments.
//! - [`diagnostics`]: iid checks on GARCH residuals.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub(crate) mod math;

pub mod diagnostics;
pub mod garch;
pub mod montecarlo;
pub mod optimize;
pub mod quantile;
pub mod series;
pub mod special;
pub mod stats;
pub mod theory;
pub mod volatility;

pub use error::{Error, Result};

/// Business days per year.
pub const YEAR_DAYS: usize = 252;
/// Business days per month.
pub const MONTH_DAYS: usize = 21;
