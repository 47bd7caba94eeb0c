//! GARCH(1,1): `X_{t+1} = eps_t sigma_t`, `sigma_t^2 = omega + alpha X_t^2 +
//! beta sigma_{t-1}^2`, with Gaussian or unit-variance Student-t innovations.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::math::{abs, exp, ln, sample_variance, sqrt};
use crate::optimize::{golden_section, nelder_mead, NelderMeadOptions};
use crate::special::standardized_student_log_pdf;
use crate::{Error, Result, YEAR_DAYS};

const LN_2PI: f64 = 1.837_877_066_409_345_5;
/// Upper bound on `alpha + beta` enforced by the fit.
pub const STATIONARITY_MARGIN: f64 = 1e-6;
pub const NU_MIN: f64 = 2.5;
pub const NU_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "law", rename_all = "lowercase"))]
pub enum Innovation {
    Gaussian,
    /// Student-t rescaled to unit variance.
    Student { nu: f64 },
}

impl Innovation {
    pub fn student(nu: f64) -> Result<Self> {
        if nu > 2.0 && !nu.is_nan() {
            Ok(Innovation::Student { nu })
        } else {
            Err(Error::InvalidDegreesOfFreedom(nu))
        }
    }

    /// Log-density of a unit-variance innovation at `z`.
    pub fn log_pdf(self, z: f64) -> f64 {
        match self {
            Innovation::Gaussian => -0.5 * (LN_2PI + z * z),
            Innovation::Student { nu } => standardized_student_log_pdf(z, nu),
        }
    }

    pub fn sampler(self) -> Result<InnovationSampler> {
        match self {
            Innovation::Gaussian => Ok(InnovationSampler::Gaussian),
            Innovation::Student { nu } => standardized_student_sampler(nu),
        }
    }
}

/// Draws unit-variance innovations.
#[derive(Debug, Clone, Copy)]
pub enum InnovationSampler {
    Gaussian,
    Student { dist: StudentT<f64>, scale: f64 },
}

impl Distribution<f64> for InnovationSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            InnovationSampler::Gaussian => rng.sample(StandardNormal),
            InnovationSampler::Student { dist, scale } => scale * dist.sample(rng),
        }
    }
}

/// Student-t(`nu`) draws multiplied by `sqrt((nu - 2) / nu)`.
pub fn standardized_student_sampler(nu: f64) -> Result<InnovationSampler> {
    if !(nu > 2.0) {
        return Err(Error::InvalidDegreesOfFreedom(nu));
    }
    let dist = StudentT::new(nu).map_err(|_| Error::InvalidDegreesOfFreedom(nu))?;
    Ok(InnovationSampler::Student {
        dist,
        scale: sqrt((nu - 2.0) / nu),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub innovation: Innovation,
    /// Observation spacing in days.
    pub delta_t: f64,
}

impl GarchParams {
    /// `omega > 0`, `alpha, beta >= 0`. Zero `alpha` and `beta` are allowed so
    /// that the iid model is a special case.
    pub fn new(omega: f64, alpha: f64, beta: f64, innovation: Innovation) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "must be positive and finite",
            });
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must be non-negative and finite",
            });
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: "must be non-negative and finite",
            });
        }
        if let Innovation::Student { nu } = innovation {
            Innovation::student(nu)?;
        }
        Ok(Self {
            omega,
            alpha,
            beta,
            innovation,
            delta_t: 1.0,
        })
    }

    /// Gaussian-fitted `(omega, alpha, beta)` combined with a Student `nu`
    /// fitted separately on the losses.
    pub fn composite(gaussian: &GarchParams, nu: f64) -> Result<Self> {
        Self::new(gaussian.omega, gaussian.alpha, gaussian.beta, Innovation::student(nu)?)
    }

    pub fn with_innovation(&self, innovation: Innovation) -> Result<Self> {
        Self::new(self.omega, self.alpha, self.beta, innovation)
    }

    pub fn persistence(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn is_stationary(&self) -> bool {
        self.persistence() < 1.0
    }

    /// `omega / (1 - alpha - beta)` when stationary.
    pub fn long_run_variance(&self) -> Option<f64> {
        self.is_stationary()
            .then(|| self.omega / (1.0 - self.persistence()))
    }

    pub fn tau_cor(&self) -> Result<f64> {
        tau_cor(self.persistence(), self.delta_t)
    }
}

/// Decay time `delta_t / |ln(alpha + beta)|` of the squared-return
/// autocorrelation.
pub fn tau_cor(persistence: f64, delta_t: f64) -> Result<f64> {
    if !(persistence > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha + beta",
            reason: "must be positive",
        });
    }
    if !(persistence < 1.0) {
        return Err(Error::NonStationary(persistence));
    }
    Ok(delta_t / abs(ln(persistence)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimulationOptions {
    pub burn_in: usize,
    /// Permit `alpha + beta >= 1`; the recursion then starts at `omega`.
    pub allow_nonstationary: bool,
}

/// Simulated returns with the conditional variance each was drawn with.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPath {
    pub returns: Vec<f64>,
    pub variances: Vec<f64>,
}

pub fn simulate_with_rng<R: Rng + ?Sized>(
    params: &GarchParams,
    n: usize,
    options: SimulationOptions,
    rng: &mut R,
) -> Result<SimulatedPath> {
    let sampler = params.innovation.sampler()?;
    let mut sigma2 = match params.long_run_variance() {
        Some(v) => v,
        None if options.allow_nonstationary => params.omega,
        None => return Err(Error::NonStationary(params.persistence())),
    };
    let mut returns = Vec::with_capacity(n);
    let mut variances = Vec::with_capacity(n);
    for i in 0..options.burn_in + n {
        let x = sampler.sample(rng) * sqrt(sigma2);
        if i >= options.burn_in {
            returns.push(x);
            variances.push(sigma2);
        }
        sigma2 = params.omega + params.alpha * x * x + params.beta * sigma2;
    }
    Ok(SimulatedPath { returns, variances })
}

/// Deterministic simulation from a 64-bit seed.
pub fn simulate(params: &GarchParams, n: usize, seed: u64, burn_in: usize) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let options = SimulationOptions {
        burn_in,
        ..SimulationOptions::default()
    };
    Ok(simulate_with_rng(params, n, options, &mut rng)?.returns)
}

/// Standardized residuals `X_{t+1} / sigma_t` after a variance burn-in.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualSeries {
    pub values: Vec<f64>,
    /// `sigma_t` for each residual.
    pub sigmas: Vec<f64>,
    pub burn_in: usize,
}

/// Filters `returns` through the variance recursion. `sigma^2_{b-1}` is the
/// sample variance of the first `b = burn_in` returns; residuals run over
/// `t = b..N-2`, so there are `N - b - 1` of them.
pub fn residuals_with_burn_in(
    returns: &[f64],
    params: &GarchParams,
    burn_in: usize,
) -> Result<ResidualSeries> {
    let n = returns.len();
    if burn_in < 2 {
        return Err(Error::InvalidParameter {
            name: "burn_in",
            reason: "must be at least 2",
        });
    }
    if n < burn_in + 2 {
        return Err(Error::TooShort {
            needed: burn_in + 2,
            got: n,
        });
    }
    let mut sigma2 = sample_variance(&returns[..burn_in]);
    let mut values = Vec::with_capacity(n - burn_in - 1);
    let mut sigmas = Vec::with_capacity(n - burn_in - 1);
    for t in burn_in..n - 1 {
        let x = returns[t];
        sigma2 = params.omega + params.alpha * x * x + params.beta * sigma2;
        let s = sqrt(sigma2);
        values.push(returns[t + 1] / s);
        sigmas.push(s);
    }
    Ok(ResidualSeries {
        values,
        sigmas,
        burn_in,
    })
}

/// Residuals with the default one-year burn-in.
pub fn residuals(returns: &[f64], params: &GarchParams) -> Result<ResidualSeries> {
    residuals_with_burn_in(returns, params, YEAR_DAYS)
}

/// Average of `ln f(X_{t+1} | sigma_t)` over the residual indices, under the
/// innovation law of `params`.
pub fn normalized_log_likelihood(returns: &[f64], params: &GarchParams) -> Result<f64> {
    if returns.len() >= 2 && sample_variance(returns) == 0.0 {
        return Err(Error::ConstantInput);
    }
    let res = residuals(returns, params)?;
    let law = params.innovation;
    let total: f64 = res
        .values
        .iter()
        .zip(&res.sigmas)
        .map(|(z, s)| law.log_pdf(*z) - ln(*s))
        .sum();
    Ok(total / res.values.len() as f64)
}

/// Gaussian quasi-log-likelihood over all observations, the variance
/// recursion started at the variance of the first year (or of the whole
/// series if shorter).
fn gaussian_qll(returns: &[f64], omega: f64, alpha: f64, beta: f64, h0: f64) -> f64 {
    let mut h = h0;
    let mut ll = 0.0;
    for &x in returns {
        ll -= 0.5 * (LN_2PI + ln(h) + x * x / h);
        h = omega + alpha * x * x + beta * h;
    }
    ll
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + exp(-x))
}

fn logit(p: f64) -> f64 {
    ln(p / (1.0 - p))
}

// Unconstrained coordinates (a, b, c): omega = var * e^a,
// alpha + beta = (1 - margin) * logistic(b), alpha = (alpha + beta) * logistic(c).
fn decode(z: &[f64], var: f64) -> (f64, f64, f64) {
    let s = (1.0 - STATIONARITY_MARGIN) * logistic(z[1]);
    let alpha = s * logistic(z[2]);
    (var * exp(z[0]), alpha, s - alpha)
}

fn encode(alpha: f64, beta: f64) -> [f64; 3] {
    let s = alpha + beta;
    [ln(1.0 - s), logit(s / (1.0 - STATIONARITY_MARGIN)), logit(alpha / s)]
}

const GRID_ALPHA: [f64; 5] = [0.02, 0.05, 0.1, 0.15, 0.2];
const GRID_BETA: [f64; 6] = [0.7, 0.8, 0.85, 0.9, 0.95, 0.97];
const REFINED_STARTS: usize = 3;

/// Gaussian quasi-maximum-likelihood fit with `alpha + beta <= 1 - 1e-6`.
///
/// The likelihood is first evaluated on a fixed `(alpha, beta)` grid with
/// variance-targeted `omega`; Nelder-Mead then refines the best few starts.
pub fn fit_gaussian(returns: &[f64]) -> Result<GarchParams> {
    let needed = 2 * YEAR_DAYS;
    if returns.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: returns.len(),
        });
    }
    let var = sample_variance(returns);
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::ConstantInput);
    }
    let h0 = {
        let head = &returns[..YEAR_DAYS.min(returns.len())];
        let v = sample_variance(head);
        if v > 0.0 {
            v
        } else {
            var
        }
    };
    let objective = |z: &[f64]| {
        let (omega, alpha, beta) = decode(z, var);
        -gaussian_qll(returns, omega, alpha, beta, h0) / returns.len() as f64
    };

    let mut starts: Vec<([f64; 3], f64)> = Vec::new();
    for &a in &GRID_ALPHA {
        for &b in &GRID_BETA {
            if a + b >= 0.999 {
                continue;
            }
            let z = encode(a, b);
            let f = objective(&z);
            if f.is_finite() {
                starts.push((z, f));
            }
        }
    }
    starts.sort_by(|x, y| x.1.total_cmp(&y.1));
    let opts = NelderMeadOptions {
        initial_step: 0.3,
        f_tol: 1e-10,
        max_iter: 2000,
        restarts: 2,
    };
    let best = starts
        .iter()
        .take(REFINED_STARTS)
        .map(|(z, _)| nelder_mead(objective, z, &opts))
        .filter(|m| m.f.is_finite())
        .min_by(|a, b| a.f.total_cmp(&b.f))
        .ok_or(Error::OptimizerFailed)?;
    let (omega, alpha, beta) = decode(&best.x, var);
    if !(omega > 0.0 && alpha > 0.0 && beta > 0.0 && alpha + beta < 1.0) {
        return Err(Error::OptimizerFailed);
    }
    GarchParams::new(omega, alpha, beta, Innovation::Gaussian)
}

/// Result of the Student `nu` fit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NuFit {
    pub nu: f64,
    /// The maximum sits on the search bound (a flat or Gaussian-like tail).
    pub at_bound: bool,
    /// Mean log-likelihood per residual at `nu`.
    pub loglik: f64,
    pub n: usize,
}

/// Maximizes the unit-variance Student log-likelihood of `residuals` over
/// `nu` in `[2.5, 50]`: a log-spaced grid followed by golden-section search
/// around the best grid point.
pub fn fit_student_nu(residuals: &[f64]) -> Result<NuFit> {
    if residuals.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = residuals.len() as f64;
    let ll = |nu: f64| residuals.iter().map(|z| standardized_student_log_pdf(*z, nu)).sum::<f64>() / n;
    const GRID: usize = 40;
    let ratio = NU_MAX / NU_MIN;
    let grid: Vec<f64> = (0..=GRID)
        .map(|i| NU_MIN * exp(ln(ratio) * i as f64 / GRID as f64))
        .collect();
    let values: Vec<f64> = grid.iter().map(|&nu| ll(nu)).collect();
    let best = (0..=GRID)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .ok_or(Error::OptimizerFailed)?;
    if !values[best].is_finite() {
        return Err(Error::OptimizerFailed);
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(GRID)];
    let (nu, neg) = golden_section(|nu| -ll(nu), lo, hi, 1e-6);
    let (nu, loglik) = if -neg >= values[best] {
        (nu, -neg)
    } else {
        (grid[best], values[best])
    };
    let at_bound = nu <= NU_MIN * (1.0 + 1e-3) || nu >= NU_MAX * (1.0 - 1e-3);
    Ok(NuFit {
        nu,
        at_bound,
        loglik,
        n: residuals.len(),
    })
}

/// Minimum number of loss residuals accepted by [`fit_student_nu_on_losses`].
pub const MIN_LOSS_RESIDUALS: usize = 100;

/// Fits `nu` on the residuals `X_{t+1} / sigma_t` with `X_{t+1} < 0`, keeping
/// `(omega, alpha, beta)` at `gaussian`.
pub fn fit_student_nu_on_losses(returns: &[f64], gaussian: &GarchParams) -> Result<NuFit> {
    let res = residuals(returns, gaussian)?;
    let negative: Vec<f64> = res.values.into_iter().filter(|z| *z < 0.0).collect();
    if negative.len() < MIN_LOSS_RESIDUALS {
        return Err(Error::TooFewPoints {
            needed: MIN_LOSS_RESIDUALS,
            got: negative.len(),
        });
    }
    fit_student_nu(&negative)
}

/// Gaussian fit followed by the Student `nu` fit on losses.
pub fn fit_composite(returns: &[f64]) -> Result<(GarchParams, NuFit)> {
    let gaussian = fit_gaussian(returns)?;
    let nu = fit_student_nu_on_losses(returns, &gaussian)?;
    Ok((GarchParams::composite(&gaussian, nu.nu)?, nu))
}

/// Calibration summary for one series.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GarchFitReport {
    pub params: GarchParams,
    pub tau_cor_days: Option<f64>,
    pub normalized_log_likelihood: f64,
    /// Filled in by the Monte Carlo harness.
    pub mean_sim_volatility_pct: Option<f64>,
    /// `100 * sqrt(252) * std` of the data.
    pub historical_volatility_pct: f64,
    pub n_obs: usize,
}

impl GarchFitReport {
    pub fn new(returns: &[f64], params: GarchParams) -> Result<Self> {
        Ok(Self {
            tau_cor_days: params.tau_cor().ok(),
            normalized_log_likelihood: normalized_log_likelihood(returns, &params)?,
            mean_sim_volatility_pct: None,
            historical_volatility_pct: annualized_volatility_pct(returns),
            n_obs: returns.len(),
            params,
        })
    }
}

/// `100 * sqrt(252) * std(returns)`.
pub fn annualized_volatility_pct(returns: &[f64]) -> f64 {
    100.0 * sqrt(YEAR_DAYS as f64 * sample_variance(returns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn usa() -> GarchParams {
        GarchParams::new(1.70e-6, 0.099, 0.888, Innovation::Gaussian).unwrap()
    }

    #[test]
    fn tau_cor_examples() {
        let t = usa().tau_cor().unwrap();
        assert!((t - 76.42).abs() < 0.1, "{t}");
        assert!((tau_cor(exp(-1.0), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(tau_cor(1.0, 1.0), Err(Error::NonStationary(_))));
        assert!(tau_cor(0.0, 1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(GarchParams::new(0.0, 0.1, 0.8, Innovation::Gaussian).is_err());
        assert!(GarchParams::new(1e-6, -0.1, 0.8, Innovation::Gaussian).is_err());
        assert!(GarchParams::new(1e-6, 0.1, 0.8, Innovation::Student { nu: 2.0 }).is_err());
        assert!(Innovation::student(2.0).is_err());
        let p = GarchParams::new(1e-6, 0.5, 0.6, Innovation::Gaussian).unwrap();
        assert!(!p.is_stationary());
        assert_eq!(p.long_run_variance(), None);
        assert!(matches!(simulate(&p, 10, 1, 0), Err(Error::NonStationary(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let opts = SimulationOptions {
            burn_in: 0,
            allow_nonstationary: true,
        };
        assert_eq!(simulate_with_rng(&p, 10, opts, &mut rng).unwrap().returns.len(), 10);
    }

    #[test]
    fn iid_special_case() {
        let p = GarchParams::new(4e-4, 0.0, 0.0, Innovation::Gaussian).unwrap();
        let x = simulate(&p, 100_000, 7, 0).unwrap();
        let v = sample_variance(&x);
        assert!((v / 4e-4 - 1.0).abs() < 0.02, "{v}");
        let res = residuals(&x, &p).unwrap();
        assert_eq!(res.values.len(), x.len() - 253);
        for (i, z) in res.values.iter().enumerate() {
            assert!((z - x[253 + i] / 0.02).abs() < 1e-12);
        }
    }

    #[test]
    fn simulation_is_deterministic_and_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let path = simulate_with_rng(&usa(), 2000, SimulationOptions::default(), &mut rng).unwrap();
        assert!(path.variances.iter().all(|v| *v >= 1.70e-6));
        assert_eq!(simulate(&usa(), 500, 11, 10).unwrap(), simulate(&usa(), 500, 11, 10).unwrap());
        assert_ne!(simulate(&usa(), 500, 11, 10).unwrap(), simulate(&usa(), 500, 12, 10).unwrap());
    }

    #[test]
    fn residual_length_and_errors() {
        let x = simulate(&usa(), 300, 5, 0).unwrap();
        assert_eq!(residuals(&x, &usa()).unwrap().values.len(), 300 - 252 - 1);
        assert!(matches!(residuals(&x[..253], &usa()), Err(Error::TooShort { .. })));
    }

    #[test]
    fn constant_series() {
        assert_eq!(fit_gaussian(&[0.001; 600]), Err(Error::ConstantInput));
        assert_eq!(normalized_log_likelihood(&[0.001; 600], &usa()), Err(Error::ConstantInput));
        assert!(matches!(fit_gaussian(&[0.001; 100]), Err(Error::TooShort { .. })));
    }

    #[test]
    fn encode_decode_round_trip() {
        let z = encode(0.1, 0.85);
        let (omega, a, b) = decode(&z, 2.0);
        assert!((a - 0.1).abs() < 1e-9 && (b - 0.85).abs() < 1e-9);
        assert!((omega - 2.0 * 0.05).abs() < 1e-9);
    }

    #[test]
    fn sampler_rejects_low_nu() {
        assert!(standardized_student_sampler(2.0).is_err());
        assert!(standardized_student_sampler(f64::NAN).is_err());
    }
}
