//! Closed-form limiting constants for fractional noise, used as Monte Carlo
//! validation oracles.
//!
//! `kappa_squared` is the partial-sum variance constant of stationary
//! fractional noise of order delta; `var_delta_x` is the limiting variance of
//! the differenced regressor. The simulation check approximates the
//! stationary process by prepending a burn-in stretch of innovations before
//! the retained window: the from-zero truncated expansion alone converges to
//! a different constant.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::fracdiff::{frac_diff_auto, generate_fi};
use crate::rng::{substream, tag_f64};
use crate::series::TimeSeries;

/// Burn-in length, as a multiple of the retained window, used when
/// approximating stationary fractional noise. The approximation error of the
/// partial-sum variance decays like (burn-in/n)^{2 delta - 1}, so it is
/// sharp for delta <= 0 and degrades toward the delta = 0.5 boundary, where
/// no stationary process exists.
pub const BURN_IN_FACTOR: usize = 3;

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::InvalidParam {
            what: "sigma2",
            message: format!("innovation variance {sigma2} must be positive"),
        });
    }
    Ok(())
}

/// Limit of n^{-1-2 delta} var(S_n) for partial sums S of fractional noise of
/// order delta:
///
///   sigma^2 Gamma(1-2 delta) / ((1+2 delta) Gamma(1+delta) Gamma(1-delta))
///
/// for |delta| < 1/2, and 2 sigma^2 / pi at the boundary delta = 1/2 (where
/// the scaling acquires a log n factor). Domain (-0.5, 0.5].
pub fn kappa_squared(delta: f64, sigma2: f64) -> Result<f64> {
    check_sigma2(sigma2)?;
    if !(delta > -0.5 && delta <= 0.5) {
        return Err(Error::InvalidParam {
            what: "delta",
            message: format!("kappa_squared needs delta in (-0.5, 0.5], got {delta}"),
        });
    }
    if delta == 0.5 {
        return Ok(2.0 * sigma2 / std::f64::consts::PI);
    }
    let ln = ln_gamma(1.0 - 2.0 * delta) - ln_gamma(1.0 + delta) - ln_gamma(1.0 - delta);
    Ok(sigma2 * ln.exp() / (1.0 + 2.0 * delta))
}

/// Limiting variance of the differenced regressor when d - d0 = delta:
///
///   sigma^2 Gamma(1-2 delta) / Gamma(1-delta)^2
///
/// for |delta| < 1/2, and 4 sigma^2 / pi at the boundary delta = -1/2.
/// Domain [-0.5, 0.5).
pub fn var_delta_x(delta: f64, sigma2: f64) -> Result<f64> {
    check_sigma2(sigma2)?;
    if !(delta >= -0.5 && delta < 0.5) {
        return Err(Error::InvalidParam {
            what: "delta",
            message: format!("var_delta_x needs delta in [-0.5, 0.5), got {delta}"),
        });
    }
    if delta == -0.5 {
        return Ok(4.0 * sigma2 / std::f64::consts::PI);
    }
    let ln = ln_gamma(1.0 - 2.0 * delta) - 2.0 * ln_gamma(1.0 - delta);
    Ok(sigma2 * ln.exp())
}

/// Result of [`partial_sum_variance_check`].
#[derive(Debug, Clone, Serialize)]
pub struct PartialSumCheck {
    /// var(S_n) / (n^{1+2 delta} [log n]) estimated across replications.
    pub empirical: f64,
    /// kappa_squared(delta, sigma2).
    pub theoretical: f64,
    /// empirical / theoretical.
    pub ratio: f64,
    /// Burn-in observations discarded before the retained window.
    pub burn_in: usize,
    /// Whether the log n factor was applied (delta = 0.5 boundary).
    pub log_scaled: bool,
    /// Monte Carlo tolerance band the ratio is expected to fall in.
    pub tolerance_band: f64,
}

/// Simulates fractional noise of order delta, forms the length-n partial sum,
/// and compares the scaled variance across replications to
/// [`kappa_squared`]. Deterministic given the seed.
pub fn partial_sum_variance_check(
    delta: f64,
    sigma2: f64,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<PartialSumCheck> {
    if n < 1024 {
        return Err(Error::InvalidParam {
            what: "n",
            message: format!("need n >= 1024 for the asymptotic regime, got {n}"),
        });
    }
    if replications < 500 {
        return Err(Error::InvalidParam {
            what: "replications",
            message: format!("need at least 500 replications, got {replications}"),
        });
    }
    let theoretical = kappa_squared(delta, sigma2)?;
    let burn_in = BURN_IN_FACTOR * n;
    let sd = sigma2.sqrt();

    let sums: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, &[tag_f64(delta), n as u64, rep as u64]);
            let eps: Vec<f64> = (0..burn_in + n)
                .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let eta = generate_fi(delta, &TimeSeries::new(eps).expect("finite innovations"))
                .expect("generation");
            eta.values()[burn_in..].iter().sum()
        })
        .collect();

    let mean = sums.iter().sum::<f64>() / replications as f64;
    let var = sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (replications - 1) as f64;

    let log_scaled = delta == 0.5;
    let mut scale = (n as f64).powf(1.0 + 2.0 * delta);
    if log_scaled {
        scale *= (n as f64).ln();
    }
    let empirical = var / scale;
    Ok(PartialSumCheck {
        empirical,
        theoretical,
        ratio: empirical / theoretical,
        burn_in,
        log_scaled,
        tolerance_band: if log_scaled { 0.20 } else { 0.10 },
    })
}

/// Exact variance of the simulated partial sum for the same construction as
/// [`partial_sum_variance_check`] (burn-in included), from the coefficient
/// sums of (1-L)^{-(1+delta)}. Serves as a deterministic oracle for the
/// Monte Carlo estimate at any delta, including the 0.5 boundary.
pub fn partial_sum_variance_exact(delta: f64, sigma2: f64, n: usize, burn_in: usize) -> f64 {
    let total = burn_in + n;
    let cum = crate::fracdiff::kernel(-(1.0 + delta), total).expect("kernel");
    let c = cum.coeffs();
    let mut var = 0.0;
    for j in 0..total {
        let w = if j < n { c[j] } else { c[j] - c[j - n] };
        var += w * w;
    }
    sigma2 * var
}

/// Median of fit_fdf residual variances across simulated FI(d0 + delta)
/// samples; converges to [`var_delta_x`]. Exposed for validation runs.
pub fn residual_variance_mc(
    delta: f64,
    d0: f64,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<f64> {
    let mut s2s: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, &[tag_f64(delta), tag_f64(d0), rep as u64]);
            let u: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let y = generate_fi(d0 + delta, &TimeSeries::new(u).expect("finite")).expect("gen");
            let x = frac_diff_auto(&y, d0 - 1.0).expect("diff");
            crate::regress::fit_df(&x).expect("fit").s2
        })
        .collect();
    s2s.sort_by(f64::total_cmp);
    Ok(s2s[replications / 2])
}
