//! Fractional differencing operators and FI(d) sample generation.
//!
//! The fractional difference operator (1-L)^d is an infinite lag polynomial;
//! applied to a finite sample with all pre-sample values set to zero it
//! becomes a lower-triangular Toeplitz matrix whose first column holds the
//! expansion coefficients. That truncation makes the operator family an exact
//! semigroup: applying d1 then d2 equals applying d1 + d2, and (1-L)^{-d}
//! inverts (1-L)^d. The tests lean on both identities.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Series length at and above which convolution switches to the FFT path.
pub const FFT_THRESHOLD: usize = 512;

/// Truncated coefficient sequence of (1-L)^d.
#[derive(Debug, Clone, PartialEq)]
pub struct FracDiffKernel {
    order: f64,
    coeffs: Vec<f64>,
}

impl FracDiffKernel {
    /// The exponent d.
    pub fn order(&self) -> f64 {
        self.order
    }

    /// Coefficient of L^i in the expansion, i = 0..len-1; coeffs[0] is 1.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Computes the first `length` coefficients of (1-L)^d.
///
/// Uses the multiplicative recursion pi_0 = 1, pi_i = pi_{i-1} (i-1-d)/i,
/// which stays finite for every real d (the Gamma-ratio form has poles at
/// nonnegative integer d and overflows for large i).
pub fn kernel(d: f64, length: usize) -> Result<FracDiffKernel> {
    if !d.is_finite() {
        return Err(Error::NonFinite { what: "d" });
    }
    if length == 0 {
        return Err(Error::InvalidParam {
            what: "length",
            message: "kernel length must be at least 1".into(),
        });
    }
    let mut coeffs = Vec::with_capacity(length);
    coeffs.push(1.0);
    for i in 1..length {
        let prev = coeffs[i - 1];
        coeffs.push(prev * ((i as f64 - 1.0 - d) / i as f64));
    }
    Ok(FracDiffKernel { order: d, coeffs })
}

/// Lower-triangular Toeplitz product: out_t = sum_{i=0}^{t} coeffs_i x_{t-i}.
pub(crate) fn convolve_direct(coeffs: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for (t, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..=t.min(coeffs.len() - 1) {
            acc += coeffs[i] * x[t - i];
        }
        *slot = acc;
    }
    out
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Same product as `convolve_direct`, via zero-padded FFT in O(n log n).
pub(crate) fn convolve_fft(coeffs: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = (2 * n).next_power_of_two();
    let mut a: Vec<Complex64> = Vec::with_capacity(m);
    a.extend(coeffs.iter().take(n).map(|&c| Complex64::new(c, 0.0)));
    a.resize(m, Complex64::new(0.0, 0.0));
    let mut b: Vec<Complex64> = Vec::with_capacity(m);
    b.extend(x.iter().map(|&v| Complex64::new(v, 0.0)));
    b.resize(m, Complex64::new(0.0, 0.0));

    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        fwd.process(&mut a);
        fwd.process(&mut b);
        for (ai, bi) in a.iter_mut().zip(&b) {
            *ai *= bi;
        }
        inv.process(&mut a);
    });

    let scale = 1.0 / m as f64;
    a[..n].iter().map(|c| c.re * scale).collect()
}

fn convolve_auto(coeffs: &[f64], x: &[f64]) -> Vec<f64> {
    if x.len() >= FFT_THRESHOLD {
        convolve_fft(coeffs, x)
    } else {
        convolve_direct(coeffs, x)
    }
}

fn apply_operator(y: &TimeSeries, d: f64, conv: fn(&[f64], &[f64]) -> Vec<f64>) -> Result<TimeSeries> {
    let k = kernel(d, y.len())?;
    TimeSeries::new(conv(k.coeffs(), y.values()))
}

/// Applies the fractional difference (1-L)^d to `y`, pre-sample values zero.
///
/// Direct O(n^2) evaluation; reference implementation for the FFT path.
pub fn frac_diff(y: &TimeSeries, d: f64) -> Result<TimeSeries> {
    apply_operator(y, d, convolve_direct)
}

/// Fast-convolution variant of [`frac_diff`]; identical result within 1e-8.
pub fn frac_diff_fft(y: &TimeSeries, d: f64) -> Result<TimeSeries> {
    apply_operator(y, d, convolve_fft)
}

/// [`frac_diff`] that picks the FFT path for series of [`FFT_THRESHOLD`] or
/// longer. This is what the regression and Monte Carlo layers call.
pub fn frac_diff_auto(y: &TimeSeries, d: f64) -> Result<TimeSeries> {
    apply_operator(y, d, convolve_auto)
}

/// Builds an FI(d) sample from innovations: x_t = sum_{j<t} psi_j u_{t-j}
/// with psi the expansion of (1-L)^{-d}, so psi_0 = 1 and psi_1 = d.
pub fn generate_fi(d: f64, innovations: &TimeSeries) -> Result<TimeSeries> {
    apply_operator(innovations, -d, convolve_auto)
}
