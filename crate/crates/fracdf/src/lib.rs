//! Fractional Dickey-Fuller (F-DF) testing for the degree of fractional
//! integration of a time series.
//!
//! A series y is FI(d) when its d-th fractional difference is white noise;
//! d need not be an integer. This crate tests the composite hypotheses
//!
//! ```text
//! H0: d >= d0   against   H1: d < d0
//! ```
//!
//! by regressing (1-L)^{d0} y_t on (1-L)^{-1+d0} y_{t-1} without intercept or
//! trend and referring the Dickey-Fuller statistics Z1 = n rho_hat or
//! Z2 = t to critical values calibrated under the least favorable null
//! d = d0, where the regressor is exactly a random walk. d0 = 1 recovers the
//! classic unit-root test; d0 = 0 tests against anti-persistence.
//!
//! # Modules
//!
//! - [`fracdiff`]: (1-L)^d kernels, fractional differencing (direct and FFT
//!   paths), FI(d) sample generation.
//! - [`regress`]: the auxiliary OLS regressions and both test statistics,
//!   including the lag-augmented variant.
//! - [`fdftest`]: critical-value tables (bundled, calibrated, interpolated)
//!   and the test verdict.
//! - [`asymp`]: closed-form limiting constants used as simulation oracles.
//! - [`montecarlo`]: seeded, parallel experiment engine for size/power
//!   tables, phi-vs-d sweeps, kernel densities, and distribution-equivalence
//!   checks.
//! - [`cli`]: the `fracdf` command-line interface.
//!
//! # Example
//!
//! ```
//! use fracdf::{bundled_table, fdf_test, generate_fi, Statistic, TimeSeries};
//! use fracdf::rng::substream;
//! use rand::Rng;
//! use rand_distr::StandardNormal;
//!
//! // A random walk (FI(1) sample) should rarely reject H0: d >= 1.
//! let mut rng = substream(42, &[]);
//! let noise: Vec<f64> = (0..250).map(|_| rng.sample(StandardNormal)).collect();
//! let y = generate_fi(1.0, &TimeSeries::new(noise)?)?;
//!
//! let table = bundled_table(Statistic::Z2);
//! let outcome = fdf_test(&y, 1.0, 0.05, Statistic::Z2, &table, 0)?;
//! println!("t = {:.3}, critical = {:.3}", outcome.value, outcome.critical_value);
//! # Ok::<(), fracdf::Error>(())
//! ```

pub mod asymp;
pub mod cli;
pub mod error;
pub mod fdftest;
pub mod fracdiff;
pub mod montecarlo;
pub mod regress;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub use fdftest::{
    bundled_table, calibrate_critical_values, calibrate_tables, fdf_test, lookup_critical,
    CriticalValueTable, Statistic, TestOutcome,
};
pub use fracdiff::{frac_diff, frac_diff_auto, frac_diff_fft, generate_fi, kernel, FracDiffKernel};
pub use montecarlo::{
    distribution_equivalence, kernel_density, run_phi_sweep, run_size_power, two_sample_ks,
    DensityGrid, McCell, McConfig, McReport,
};
pub use regress::{fit_df, fit_fadf, fit_fdf, RegressionFit};
pub use series::TimeSeries;
