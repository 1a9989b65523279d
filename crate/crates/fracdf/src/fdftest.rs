//! Critical regions, critical-value tables, and the test verdict for
//! H0: d >= d0 against H1: d < d0.
//!
//! Under d = d0 (the least favorable point of the composite null) the
//! fractional regression collapses to the plain Dickey-Fuller regression on a
//! pure random walk, so critical values are calibrated by simulating random
//! walks and taking empirical quantiles of the chosen statistic. A
//! pre-calibrated table ships with the crate; `calibrate` regenerates it from
//! a recorded seed.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regress::{fit_df, fit_fadf, fit_fdf, RegressionFit};
use crate::rng::substream;
use crate::series::TimeSeries;

/// Minimum number of expected tail observations when calibrating a quantile.
const MIN_TAIL_COUNT: usize = 100;

/// Tolerance for matching a requested alpha against the calibrated grid.
const ALPHA_EPS: f64 = 1e-12;

/// Which Dickey-Fuller statistic to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    /// Normalized bias n * rho_hat.
    #[serde(rename = "z1")]
    Z1,
    /// t-ratio on rho_hat.
    #[serde(rename = "z2")]
    Z2,
}

impl Statistic {
    pub fn extract(self, fit: &RegressionFit) -> f64 {
        match self {
            Statistic::Z1 => fit.z1,
            Statistic::Z2 => fit.z2,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Z1 => write!(f, "z1"),
            Statistic::Z2 => write!(f, "z2"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z1" => Ok(Statistic::Z1),
            "z2" => Ok(Statistic::Z2),
            other => Err(Error::InvalidParam {
                what: "statistic",
                message: format!("expected z1 or z2, got {other:?}"),
            }),
        }
    }
}

/// How a table was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub replications: usize,
    pub seed: u64,
    pub n_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
}

/// Per-(n, alpha) critical points c_n(alpha) for one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub statistic: Statistic,
    /// n -> sorted (alpha, critical value) pairs.
    entries: BTreeMap<usize, Vec<(f64, f64)>>,
    pub calibration: Calibration,
}

impl CriticalValueTable {
    pub fn n_grid(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn alpha_grid(&self) -> &[f64] {
        &self.calibration.alpha_grid
    }

    /// Iterates entries as (n, alpha, critical value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.entries
            .iter()
            .flat_map(|(&n, row)| row.iter().map(move |&(a, c)| (n, a, c)))
    }
}

/// Empirical quantile with linear interpolation between order statistics.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    let m = sorted.len();
    if m == 1 {
        return sorted[0];
    }
    let h = q * (m - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(m - 1);
    let w = h - lo as f64;
    sorted[lo] + w * (sorted[hi] - sorted[lo])
}

/// Simulates the null distribution of both statistics at sample size n:
/// a random walk of standard normal innovations, fitted with [`fit_df`].
/// Replication r draws from the substream keyed by (seed, n, r).
fn simulate_null(n: usize, replications: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let stats: Vec<(f64, f64)> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, &[n as u64, rep as u64]);
            let mut acc = 0.0;
            let walk: Vec<f64> = (0..n)
                .map(|_| {
                    acc += rng.sample::<f64, _>(StandardNormal);
                    acc
                })
                .collect();
            let fit = fit_df(&TimeSeries::new(walk).expect("finite walk")).expect("null fit");
            (fit.z1, fit.z2)
        })
        .collect();
    stats.into_iter().unzip()
}

fn validate_grids(n_grid: &[usize], alpha_grid: &[f64], replications: usize) -> Result<()> {
    if n_grid.is_empty() || alpha_grid.is_empty() {
        return Err(Error::InvalidParam {
            what: "grid",
            message: "n and alpha grids must be nonempty".into(),
        });
    }
    if let Some(&n) = n_grid.iter().find(|&&n| n < 3) {
        return Err(Error::InvalidParam {
            what: "n_grid",
            message: format!("sample size {n} is below the regression minimum of 3"),
        });
    }
    for &alpha in alpha_grid {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParam {
                what: "alpha_grid",
                message: format!("alpha {alpha} outside (0, 1)"),
            });
        }
        if (replications as f64 * alpha) < MIN_TAIL_COUNT as f64 {
            return Err(Error::InsufficientReplications {
                replications,
                alpha,
                min_tail: MIN_TAIL_COUNT,
            });
        }
    }
    Ok(())
}

/// Calibrates tables for several statistics from one simulation pass.
pub fn calibrate_tables(
    statistics: &[Statistic],
    n_grid: &[usize],
    alpha_grid: &[f64],
    replications: usize,
    seed: u64,
) -> Result<Vec<CriticalValueTable>> {
    validate_grids(n_grid, alpha_grid, replications)?;
    let mut n_sorted: Vec<usize> = n_grid.to_vec();
    n_sorted.sort_unstable();
    n_sorted.dedup();
    let mut alpha_sorted: Vec<f64> = alpha_grid.to_vec();
    alpha_sorted.sort_by(f64::total_cmp);
    alpha_sorted.dedup();

    let mut per_stat: Vec<BTreeMap<usize, Vec<(f64, f64)>>> =
        vec![BTreeMap::new(); statistics.len()];
    for &n in &n_sorted {
        let (mut z1, mut z2) = simulate_null(n, replications, seed);
        z1.sort_by(f64::total_cmp);
        z2.sort_by(f64::total_cmp);
        for (si, stat) in statistics.iter().enumerate() {
            let sorted = match stat {
                Statistic::Z1 => &z1,
                Statistic::Z2 => &z2,
            };
            let row: Vec<(f64, f64)> = alpha_sorted
                .iter()
                .map(|&a| (a, quantile(sorted, a)))
                .collect();
            per_stat[si].insert(n, row);
        }
    }

    Ok(statistics
        .iter()
        .zip(per_stat)
        .map(|(&statistic, entries)| CriticalValueTable {
            statistic,
            entries,
            calibration: Calibration {
                replications,
                seed,
                n_grid: n_sorted.clone(),
                alpha_grid: alpha_sorted.clone(),
            },
        })
        .collect())
}

/// Calibrates the table for one statistic by simulation under d = d0.
pub fn calibrate_critical_values(
    statistic: Statistic,
    n_grid: &[usize],
    alpha_grid: &[f64],
    replications: usize,
    seed: u64,
) -> Result<CriticalValueTable> {
    Ok(calibrate_tables(&[statistic], n_grid, alpha_grid, replications, seed)?
        .pop()
        .expect("one table per statistic"))
}

/// Looks up c_n(alpha): exact on grid points, linear interpolation in 1/n
/// between them, and the largest-n entry for n beyond the grid (treated as
/// the asymptotic row).
pub fn lookup_critical(table: &CriticalValueTable, n: usize, alpha: f64) -> Result<f64> {
    let row_value = |row: &[(f64, f64)]| -> Result<f64> {
        row.iter()
            .find(|(a, _)| (a - alpha).abs() <= ALPHA_EPS)
            .map(|&(_, c)| c)
            .ok_or_else(|| Error::TableCoverage {
                what: format!("alpha={alpha} (calibrated grid {:?})", table.alpha_grid()),
            })
    };

    if let Some(row) = table.entries.get(&n) {
        return row_value(row);
    }
    let (&n_min, _) = table.entries.iter().next().ok_or_else(|| Error::TableCoverage {
        what: "empty table".into(),
    })?;
    let (&n_max, last_row) = table.entries.iter().next_back().expect("nonempty");
    if n > n_max {
        return row_value(last_row);
    }
    if n < n_min {
        return Err(Error::TableCoverage {
            what: format!("n={n} below smallest calibrated size {n_min}"),
        });
    }
    let (&n_lo, row_lo) = table.entries.range(..n).next_back().expect("bracket below");
    let (&n_hi, row_hi) = table.entries.range(n..).next().expect("bracket above");
    let c_lo = row_value(row_lo)?;
    let c_hi = row_value(row_hi)?;
    let w = (1.0 / n as f64 - 1.0 / n_lo as f64) / (1.0 / n_hi as f64 - 1.0 / n_lo as f64);
    Ok(c_lo + w * (c_hi - c_lo))
}

/// Test verdict for one series.
#[derive(Debug, Clone, Serialize)]
pub struct TestOutcome {
    pub d0: f64,
    pub statistic_used: Statistic,
    /// Realized value of the statistic.
    pub value: f64,
    pub critical_value: f64,
    pub alpha: f64,
    /// True iff value < critical_value (strict; ties do not reject).
    pub reject: bool,
    pub fit: RegressionFit,
}

/// Runs the test of H0: d >= d0 against H1: d < d0 at level alpha, using p
/// augmentation lags (p = 0 is the simple test). d0 = 1 with p = 0 is exactly
/// the classic Dickey-Fuller unit-root test.
pub fn fdf_test(
    y: &TimeSeries,
    d0: f64,
    alpha: f64,
    statistic: Statistic,
    table: &CriticalValueTable,
    p: usize,
) -> Result<TestOutcome> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParam {
            what: "alpha",
            message: format!("test level {alpha} outside (0, 0.5)"),
        });
    }
    if statistic != table.statistic {
        return Err(Error::InvalidParam {
            what: "table",
            message: format!(
                "table calibrated for {}, test requested {}",
                table.statistic, statistic
            ),
        });
    }
    let fit = if p > 0 {
        fit_fadf(y, d0, p)?
    } else {
        fit_fdf(y, d0)?
    };
    let value = statistic.extract(&fit);
    let critical_value = lookup_critical(table, fit.n, alpha)?;
    Ok(TestOutcome {
        d0,
        statistic_used: statistic,
        value,
        critical_value,
        alpha,
        reject: value < critical_value,
        fit,
    })
}

// ---------------------------------------------------------------------------
// CSV serialization: statistic,n,alpha,critical_value,replications,seed
// ---------------------------------------------------------------------------

pub fn write_tables_csv<W: Write>(tables: &[CriticalValueTable], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["statistic", "n", "alpha", "critical_value", "replications", "seed"])?;
    for t in tables {
        for (n, alpha, c) in t.iter() {
            wtr.write_record([
                t.statistic.to_string(),
                n.to_string(),
                alpha.to_string(),
                c.to_string(),
                t.calibration.replications.to_string(),
                t.calibration.seed.to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a table CSV, returning one table per statistic present.
pub fn read_tables_csv<R: Read>(r: R) -> Result<Vec<CriticalValueTable>> {
    let mut rdr = csv::Reader::from_reader(r);
    struct Acc {
        entries: BTreeMap<usize, Vec<(f64, f64)>>,
        replications: usize,
        seed: u64,
    }
    let mut by_stat: BTreeMap<String, Acc> = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |idx: usize, name: &str| -> Result<&str> {
            rec.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing column {name}"),
            })
        };
        let parse_f64 = |s: &str, name: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad {name}: {s:?}"),
            })
        };
        let stat = field(0, "statistic")?.trim().to_string();
        Statistic::from_str(&stat)?;
        let n = parse_f64(field(1, "n")?, "n")? as usize;
        let alpha = parse_f64(field(2, "alpha")?, "alpha")?;
        let c = parse_f64(field(3, "critical_value")?, "critical_value")?;
        let reps = parse_f64(field(4, "replications")?, "replications")? as usize;
        let seed = parse_f64(field(5, "seed")?, "seed")? as u64;
        let acc = by_stat.entry(stat).or_insert_with(|| Acc {
            entries: BTreeMap::new(),
            replications: reps,
            seed,
        });
        acc.entries.entry(n).or_default().push((alpha, c));
    }
    let mut out = Vec::new();
    for (stat, mut acc) in by_stat {
        let mut alpha_grid: Vec<f64> = Vec::new();
        for row in acc.entries.values_mut() {
            row.sort_by(|a, b| a.0.total_cmp(&b.0));
            for &(a, _) in row.iter() {
                if !alpha_grid.iter().any(|&g| (g - a).abs() <= ALPHA_EPS) {
                    alpha_grid.push(a);
                }
            }
        }
        alpha_grid.sort_by(f64::total_cmp);
        let n_grid = acc.entries.keys().copied().collect();
        out.push(CriticalValueTable {
            statistic: Statistic::from_str(&stat)?,
            entries: acc.entries,
            calibration: Calibration {
                replications: acc.replications,
                seed: acc.seed,
                n_grid,
                alpha_grid,
            },
        });
    }
    if out.is_empty() {
        return Err(Error::TableCoverage {
            what: "no rows in table file".into(),
        });
    }
    Ok(out)
}

/// The table calibrated at release time and compiled into the crate.
///
/// Regenerate with:
/// `fracdf calibrate --stat both --n-grid 25,50,100,250,500,1000,5000
///  --alpha-grid 0.01,0.025,0.05,0.1 --reps 200000 --seed 20260810`
pub fn bundled_table(statistic: Statistic) -> CriticalValueTable {
    static CSV: &str = include_str!("../data/critical_values.csv");
    read_tables_csv(CSV.as_bytes())
        .expect("bundled table parses")
        .into_iter()
        .find(|t| t.statistic == statistic)
        .expect("bundled table covers both statistics")
}
