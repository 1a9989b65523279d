//! OLS estimation of the auxiliary autoregressions and the two test statistics.
//!
//! The simple regression is (1-L)x_t = rho x_{t-1} + e_t over t = 1..n with
//! x_0 = 0, no intercept, no trend. The residual variance uses divisor n (not
//! n - k), which keeps the statistics aligned with the n^-1 and n^-2
//! normalizations of the asymptotics; this differs from common OLS software
//! defaults.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracdiff::frac_diff_auto;
use crate::series::TimeSeries;

/// Relative pivot threshold below which the normal-equations solve is
/// declared rank deficient.
const RANK_TOL: f64 = 1e-12;

/// Fitted auxiliary regression.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    /// Coefficient on the lagged level regressor.
    pub rho_hat: f64,
    /// rho_hat + 1, the AR(1) representation of the same fit.
    pub phi_hat: f64,
    /// Residual variance with divisor n.
    pub s2: f64,
    /// Normalized-bias statistic n * rho_hat.
    pub z1: f64,
    /// t-ratio on rho_hat.
    pub z2: f64,
    /// Effective sample size (regression rows).
    pub n: usize,
    /// Augmentation coefficients alpha_1..alpha_p; empty for the simple test.
    pub lag_coeffs: Vec<f64>,
}

impl RegressionFit {
    /// Standard error of rho_hat implied by z2 (z2 = rho_hat / se).
    pub fn se_rho(&self) -> f64 {
        self.rho_hat / self.z2
    }
}

/// Dickey-Fuller regression of (1-L)x_t on x_{t-1}, sums over t = 1..n with
/// x_0 = 0.
pub fn fit_df(x: &TimeSeries) -> Result<RegressionFit> {
    let v = x.values();
    let n = v.len();
    if n < 3 {
        return Err(Error::TooShort { n, min: 3 });
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for t in 1..n {
        let lag = v[t - 1];
        num += (v[t] - lag) * lag;
        den += lag * lag;
    }
    // t = 1 contributes nothing to the sums (x_0 = 0) but its residual, which
    // is x_1 itself, still enters s2.
    if den <= 0.0 {
        return Err(Error::DegenerateRegression {
            message: "sum of squared lagged values is zero".into(),
        });
    }

    let rho_hat = num / den;
    let mut rss = v[0] * v[0];
    for t in 1..n {
        let e = (v[t] - v[t - 1]) - rho_hat * v[t - 1];
        rss += e * e;
    }
    let nf = n as f64;
    let s2 = rss / nf;
    if s2 <= 0.0 {
        return Err(Error::DegenerateRegression {
            message: "residual variance is zero".into(),
        });
    }

    Ok(RegressionFit {
        rho_hat,
        phi_hat: 1.0 + rho_hat,
        s2,
        z1: nf * rho_hat,
        z2: num / (s2 * den).sqrt(),
        n,
        lag_coeffs: Vec::new(),
    })
}

/// Fractional Dickey-Fuller regression for the order d0: forms
/// x_t = (1-L)^{-1+d0} y_t and runs [`fit_df`] on it. d0 = 1 is the classic
/// Dickey-Fuller regression on y itself.
pub fn fit_fdf(y: &TimeSeries, d0: f64) -> Result<RegressionFit> {
    let x = frac_diff_auto(y, d0 - 1.0)?;
    fit_df(&x)
}

/// Fractional augmented Dickey-Fuller regression with p lags of (1-L)^{d0} y:
///
/// (1-L)^{d0} y_t = rho x_{t-1} + sum_{j=1..p} alpha_j (1-L)^{d0} y_{t-j} + e_t
///
/// over t = p+1..n, where x = (1-L)^{-1+d0} y. The effective sample size is
/// n - p; p = 0 reduces exactly to [`fit_fdf`].
pub fn fit_fadf(y: &TimeSeries, d0: f64, p: usize) -> Result<RegressionFit> {
    if p == 0 {
        return fit_fdf(y, d0);
    }
    let x = frac_diff_auto(y, d0 - 1.0)?;
    let v = x.values();
    let n = v.len();
    if n < p + 3 {
        return Err(Error::TooShort { n, min: p + 3 });
    }

    // dx_t = x_t - x_{t-1} equals (1-L)^{d0} y_t under the zero pre-sample
    // convention; building the lags from dx keeps the p = 0 reduction exact.
    let mut dx = Vec::with_capacity(n);
    dx.push(v[0]);
    for t in 1..n {
        dx.push(v[t] - v[t - 1]);
    }

    let k = p + 1;
    let rows = n - p;
    // Row for time t (1-indexed t = p+1..n): [x_{t-1}, dx_{t-1}, .., dx_{t-p}].
    let row = |t: usize, j: usize| -> f64 {
        if j == 0 {
            v[t - 2] // x_{t-1}; v is 0-indexed
        } else {
            dx[t - 1 - j]
        }
    };

    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for t in (p + 1)..=n {
        let yt = dx[t - 1];
        for a in 0..k {
            let ra = row(t, a);
            xty[a] += ra * yt;
            for b in a..k {
                xtx[a][b] += ra * row(t, b);
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            xtx[a][b] = xtx[b][a];
        }
    }

    let coefs = solve_spd(xtx.clone(), xty)?;
    let rho_hat = coefs[0];

    let mut rss = 0.0;
    for t in (p + 1)..=n {
        let mut fitted = 0.0;
        for (a, c) in coefs.iter().enumerate() {
            fitted += c * row(t, a);
        }
        let e = dx[t - 1] - fitted;
        rss += e * e;
    }
    let nf = rows as f64;
    let s2 = rss / nf;
    if s2 <= 0.0 {
        return Err(Error::DegenerateRegression {
            message: "residual variance is zero".into(),
        });
    }

    // Var(rho_hat) = s2 * [(X'X)^{-1}]_00, first column of the inverse via a
    // unit-vector solve.
    let mut e0 = vec![0.0; k];
    e0[0] = 1.0;
    let inv_col0 = solve_spd(xtx, e0)?;
    let se = (s2 * inv_col0[0]).sqrt();
    if !se.is_finite() || se <= 0.0 {
        return Err(Error::DegenerateRegression {
            message: "standard error of rho is not positive".into(),
        });
    }

    Ok(RegressionFit {
        rho_hat,
        phi_hat: 1.0 + rho_hat,
        s2,
        z1: nf * rho_hat,
        z2: rho_hat / se,
        n: rows,
        lag_coeffs: coefs[1..].to_vec(),
    })
}

/// Gaussian elimination with partial pivoting on the normal equations,
/// failing when a pivot falls below `RANK_TOL` relative to the largest
/// diagonal entry.
fn solve_spd(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let k = b.len();
    let scale = a
        .iter()
        .enumerate()
        .map(|(i, r)| r[i].abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    for col in 0..k {
        let piv = (col..k)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        if a[piv][col].abs() < RANK_TOL * scale {
            return Err(Error::RankDeficient { column: col });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..k {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..k {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut acc = b[col];
        for c in (col + 1)..k {
            acc -= a[col][c] * x[c];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}
