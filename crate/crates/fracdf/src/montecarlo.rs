//! Monte Carlo experiment engine: size/power tables, phi-vs-d sweeps, kernel
//! density estimates of the null distributions, and distribution-equivalence
//! checks across configurations sharing the same gap d - d0.
//!
//! Replications and cells are independent work units. Each replication draws
//! from a ChaCha substream keyed by (seed, d_true, d0, n, replication), so a
//! report is bit-identical no matter how many worker threads run it.

use std::io::{Read, Write};
use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdftest::{lookup_critical, CriticalValueTable, Statistic};
use crate::fracdiff::generate_fi;
use crate::regress::fit_fdf;
use crate::rng::{substream, tag_f64};
use crate::series::TimeSeries;

/// One experiment: fixed true order and sample size, a grid of null orders
/// and test levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub d_true: f64,
    pub d0_grid: Vec<f64>,
    pub n: usize,
    pub replications: usize,
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
    pub statistic: Statistic,
    /// Attach the raw statistic sample of every (d_true, d0) cell to the
    /// report (JSON output only).
    #[serde(default)]
    pub keep_samples: bool,
}

impl McConfig {
    /// Checks every field, collecting all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if !self.d_true.is_finite() {
            violations.push(format!("d_true: non-finite value {}", self.d_true));
        }
        if self.d0_grid.is_empty() {
            violations.push("d0_grid: must be nonempty".to_string());
        }
        for (i, d0) in self.d0_grid.iter().enumerate() {
            if !d0.is_finite() {
                violations.push(format!("d0_grid[{i}]: non-finite value {d0}"));
            }
        }
        if self.n < 3 {
            violations.push(format!("n: sample size {} is below 3", self.n));
        }
        if self.replications < 1 {
            violations.push("replications: must be at least 1".to_string());
        }
        if self.alpha_grid.is_empty() {
            violations.push("alpha_grid: must be nonempty".to_string());
        }
        for (i, a) in self.alpha_grid.iter().enumerate() {
            if !(*a > 0.0 && *a < 0.5) {
                violations.push(format!("alpha_grid[{i}]: {a} outside (0, 0.5)"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig { violations })
        }
    }
}

/// Whether a cell sits under the null (d_true >= d0) or the alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    /// d_true >= d0; `frequency` is the NON-rejection frequency, matching the
    /// convention of the published size tables.
    #[serde(rename = "size")]
    Size,
    /// d_true < d0; `frequency` is the rejection frequency.
    #[serde(rename = "power")]
    Power,
}

impl std::fmt::Display for CellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellKind::Size => write!(f, "size"),
            CellKind::Power => write!(f, "power"),
        }
    }
}

/// One (d_true, d0, alpha) cell of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub d_true: f64,
    pub d0: f64,
    /// d_true - d0.
    pub delta: f64,
    pub n: usize,
    pub alpha: f64,
    pub statistic: Statistic,
    /// Reported per the table convention of `kind`; see [`CellKind`].
    pub frequency: f64,
    pub kind: CellKind,
}

impl McCell {
    /// Raw rejection frequency regardless of the table convention.
    pub fn rejection_rate(&self) -> f64 {
        match self.kind {
            CellKind::Size => 1.0 - self.frequency,
            CellKind::Power => self.frequency,
        }
    }
}

/// Aggregated experiment output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: McConfig,
    pub cells: Vec<McCell>,
    /// Raw statistic samples per d0 grid entry when requested.
    pub samples: Option<Vec<(f64, Vec<f64>)>>,
    pub elapsed_secs: f64,
}

/// Simulates the test statistic under y ~ FI(d_true) with the regression run
/// at d0, one value per replication. Identical arguments give bit-identical
/// samples; this is the substream contract every experiment shares.
pub fn simulate_statistics(
    d_true: f64,
    d0: f64,
    n: usize,
    replications: usize,
    seed: u64,
    statistic: Statistic,
) -> Vec<f64> {
    (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, &[tag_f64(d_true), tag_f64(d0), n as u64, rep as u64]);
            let u: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let y = generate_fi(d_true, &TimeSeries::new(u).expect("finite innovations"))
                .expect("generation");
            let fit = fit_fdf(&y, d0).expect("regression under simulation");
            statistic.extract(&fit)
        })
        .collect()
}

/// Runs the size/power experiment described by `config`, thresholding with
/// critical values from `table`.
pub fn run_size_power(config: &McConfig, table: &CriticalValueTable) -> Result<McReport> {
    config.validate()?;
    if table.statistic != config.statistic {
        return Err(Error::InvalidParam {
            what: "table",
            message: format!(
                "table calibrated for {}, experiment uses {}",
                table.statistic, config.statistic
            ),
        });
    }
    // Fail on coverage gaps before burning CPU.
    let criticals: Vec<f64> = config
        .alpha_grid
        .iter()
        .map(|&a| lookup_critical(table, config.n, a))
        .collect::<Result<_>>()?;

    let start = Instant::now();
    let mut cells = Vec::new();
    let mut samples = config.keep_samples.then(Vec::new);
    for &d0 in &config.d0_grid {
        let stats = simulate_statistics(
            config.d_true,
            d0,
            config.n,
            config.replications,
            config.seed,
            config.statistic,
        );
        let delta = config.d_true - d0;
        let kind = if config.d_true < d0 {
            CellKind::Power
        } else {
            CellKind::Size
        };
        for (&alpha, &crit) in config.alpha_grid.iter().zip(&criticals) {
            let rejections = stats.iter().filter(|&&v| v < crit).count();
            let rate = rejections as f64 / config.replications as f64;
            let frequency = match kind {
                CellKind::Size => 1.0 - rate,
                CellKind::Power => rate,
            };
            cells.push(McCell {
                d_true: config.d_true,
                d0,
                delta,
                n: config.n,
                alpha,
                statistic: config.statistic,
                frequency,
                kind,
            });
        }
        if let Some(s) = samples.as_mut() {
            s.push((d0, stats));
        }
    }
    Ok(McReport {
        config: config.clone(),
        cells,
        samples,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// One point of the phi-vs-d sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    /// True fractional order of y on the sweep axis.
    pub d: f64,
    /// Order of the series actually generated and fitted, 1 + d - d0: the
    /// regression input x = (1-L)^{-1+d0} y.
    pub generated_order: f64,
    pub phi_hat: f64,
}

/// Fixes one innovation path of length n and, for every d on the grid, fits
/// the first-order autoregression to x ~ FI(1 + d - d0) built from that same
/// path. The curve flattens at 1 for d >= d0.
pub fn run_phi_sweep(
    d_min: f64,
    d_max: f64,
    step: f64,
    d0: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if !(step.is_finite() && step > 0.0) || !d_min.is_finite() || !d_max.is_finite() || d_min > d_max
    {
        return Err(Error::InvalidParam {
            what: "sweep grid",
            message: format!("empty or invalid grid: d_min={d_min} d_max={d_max} step={step}"),
        });
    }
    if n < 100 {
        return Err(Error::InvalidParam {
            what: "n",
            message: format!("sweep needs n >= 100, got {n}"),
        });
    }
    let mut rng = substream(seed, &[0x5eed]);
    let u: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let u = TimeSeries::new(u)?;

    let count = ((d_max - d_min) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|k| {
            let d = d_min + k as f64 * step;
            let order = 1.0 + d - d0;
            let x = generate_fi(order, &u)?;
            let fit = crate::regress::fit_df(&x)?;
            Ok(SweepPoint {
                d,
                generated_order: order,
                phi_hat: fit.phi_hat,
            })
        })
        .collect()
}

/// Kernel density estimate on an equispaced grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub bandwidth: f64,
    pub sample_size: usize,
}

impl DensityGrid {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            acc += 0.5 * (self.ys[i] + self.ys[i - 1]) * (self.xs[i] - self.xs[i - 1]);
        }
        acc
    }
}

/// Gaussian kernel density of `samples` with bandwidth `h`, evaluated at `xs`.
pub fn gaussian_kde(samples: &[f64], h: f64, xs: &[f64]) -> Vec<f64> {
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * h * samples.len() as f64);
    xs.iter()
        .map(|&x| {
            let mut acc = 0.0;
            for &s in samples {
                let z = (x - s) / h;
                acc += (-0.5 * z * z).exp();
            }
            acc * norm
        })
        .collect()
}

/// Silverman rule-of-thumb bandwidth: 0.9 min(sd, IQR/1.34) m^{-1/5}.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    let m = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / m;
    let sd = (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt();
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = crate::fdftest::quantile(&sorted, 0.75) - crate::fdftest::quantile(&sorted, 0.25);
    let spread = sd.min(iqr / 1.34);
    if !(spread.is_finite() && spread > 0.0) {
        return Err(Error::DegenerateSample {
            message: "sample has zero spread, bandwidth undefined".into(),
        });
    }
    Ok(0.9 * spread * m.powf(-0.2))
}

/// Gaussian-kernel density with Silverman bandwidth on an equispaced grid
/// spanning [min - 3h, max + 3h].
pub fn kernel_density(samples: &[f64], grid_size: usize) -> Result<DensityGrid> {
    if samples.len() < 30 {
        return Err(Error::TooShort {
            n: samples.len(),
            min: 30,
        });
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite { what: "samples" });
    }
    if grid_size < 2 {
        return Err(Error::InvalidParam {
            what: "grid_size",
            message: "need at least 2 grid points".into(),
        });
    }
    let h = silverman_bandwidth(samples)?;
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let stepw = (hi - lo) / (grid_size - 1) as f64;
    let xs: Vec<f64> = (0..grid_size).map(|i| lo + i as f64 * stepw).collect();
    let ys = gaussian_kde(samples, h, &xs);
    Ok(DensityGrid {
        xs,
        ys,
        bandwidth: h,
        sample_size: samples.len(),
    })
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while ia < a.len() && ib < b.len() {
        let x = a[ia].min(b[ib]);
        while ia < a.len() && a[ia] <= x {
            ia += 1;
        }
        while ib < b.len() && b[ib] <= x {
            ib += 1;
        }
        sup = sup.max((ia as f64 / na - ib as f64 / nb).abs());
    }
    sup
}

/// A (d, d0) configuration of the equivalence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivConfig {
    pub d: f64,
    pub d0: f64,
}

/// Pairwise KS distances between Z2 samples across configurations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceMatrix {
    pub configs: Vec<EquivConfig>,
    /// ks[i][j] = KS distance between configurations i and j.
    pub ks: Vec<Vec<f64>>,
    pub n: usize,
    pub replications: usize,
}

/// For every (d, d + offset) configuration, simulates Z2 samples and returns
/// the matrix of pairwise two-sample KS distances. Configurations sharing the
/// same offset estimate the same distribution; identical configurations share
/// the same substreams and give a distance of exactly zero.
pub fn distribution_equivalence(
    d_values: &[f64],
    d0_offsets: &[f64],
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<EquivalenceMatrix> {
    if d_values.is_empty() || d0_offsets.is_empty() {
        return Err(Error::InvalidParam {
            what: "grid",
            message: "d_values and d0_offsets must be nonempty".into(),
        });
    }
    if replications < 1000 {
        return Err(Error::InvalidParam {
            what: "replications",
            message: format!("need at least 1000 replications, got {replications}"),
        });
    }
    let configs: Vec<EquivConfig> = d_values
        .iter()
        .flat_map(|&d| d0_offsets.iter().map(move |&off| EquivConfig { d, d0: d + off }))
        .collect();
    let samples: Vec<Vec<f64>> = configs
        .iter()
        .map(|c| simulate_statistics(c.d, c.d0, n, replications, seed, Statistic::Z2))
        .collect();
    let ks = samples
        .iter()
        .map(|si| samples.iter().map(|sj| two_sample_ks(si, sj)).collect())
        .collect();
    Ok(EquivalenceMatrix {
        configs,
        ks,
        n,
        replications,
    })
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// CSV: one row per cell (d_true, d0, delta, n, alpha, statistic, frequency,
/// kind).
pub fn write_report_csv<W: Write>(report: &McReport, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "d_true",
        "d0",
        "delta",
        "n",
        "alpha",
        "statistic",
        "frequency",
        "kind",
    ])?;
    for c in &report.cells {
        wtr.write_record([
            c.d_true.to_string(),
            c.d0.to_string(),
            c.delta.to_string(),
            c.n.to_string(),
            c.alpha.to_string(),
            c.statistic.to_string(),
            c.frequency.to_string(),
            c.kind.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads rows written by [`write_report_csv`].
pub fn read_report_csv<R: Read>(r: R) -> Result<Vec<McCell>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let get = |idx: usize| -> Result<&str> {
            rec.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing column {idx}"),
            })
        };
        let num = |idx: usize| -> Result<f64> {
            get(idx)?.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad number in column {idx}"),
            })
        };
        let kind = match get(7)?.trim() {
            "size" => CellKind::Size,
            "power" => CellKind::Power,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("bad kind {other:?}"),
                })
            }
        };
        out.push(McCell {
            d_true: num(0)?,
            d0: num(1)?,
            delta: num(2)?,
            n: num(3)? as usize,
            alpha: num(4)?,
            statistic: get(5)?.trim().parse()?,
            frequency: num(6)?,
            kind,
        });
    }
    Ok(out)
}

/// Two-column CSV (x, density).
pub fn write_density_csv<W: Write>(grid: &DensityGrid, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["x", "density"])?;
    for (x, y) in grid.xs.iter().zip(&grid.ys) {
        wtr.write_record([x.to_string(), y.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads rows written by [`write_density_csv`].
pub fn read_density_csv<R: Read>(r: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |idx: usize| -> Result<f64> {
            rec.get(idx)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("bad number in column {idx}"),
                })
        };
        out.push((num(0)?, num(1)?));
    }
    Ok(out)
}

/// Sweep CSV: one row per grid point (d, generated_order, phi_hat).
pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["d", "generated_order", "phi_hat"])?;
    for p in points {
        wtr.write_record([
            p.d.to_string(),
            p.generated_order.to_string(),
            p.phi_hat.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
