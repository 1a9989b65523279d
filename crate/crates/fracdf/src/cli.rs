//! Command-line front-end.
//!
//! Data goes to stdout (or `--output`), diagnostics to stderr. Exit codes:
//! 0 success (for `test`: no rejection), 10 rejection, 2 unreadable or empty
//! input, 3 non-numeric rows, 4 degenerate regression or sample, 5 invalid
//! arguments or configuration.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fdftest::{
    bundled_table, calibrate_tables, fdf_test, read_tables_csv, write_tables_csv, Statistic,
};
use crate::fracdiff::{frac_diff_auto, generate_fi};
use crate::montecarlo::{
    kernel_density, run_phi_sweep, run_size_power, write_density_csv, write_report_csv,
    write_sweep_csv, McConfig, McReport,
};
use crate::rng::substream;
use crate::series::TimeSeries;

/// Environment variable overriding the bundled critical-value table.
pub const TABLE_ENV_VAR: &str = "FRACDF_TABLE";

/// Name of the bundled experiment configuration reproducing the size and
/// power tables.
pub const TABLES_1_4: &str = "tables_1_4";

const EXIT_OK: i32 = 0;
const EXIT_UNREADABLE: i32 = 2;
const EXIT_PARSE: i32 = 3;
const EXIT_DEGENERATE: i32 = 4;
const EXIT_USAGE: i32 = 5;
const EXIT_REJECT: i32 = 10;

#[derive(Parser)]
#[command(
    name = "fracdf",
    about = "Fractional Dickey-Fuller test for the degree of fractional integration",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatArg {
    Z1,
    Z2,
}

impl From<StatArg> for Statistic {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Z1 => Statistic::Z1,
            StatArg::Z2 => Statistic::Z2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatOrBoth {
    Z1,
    Z2,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Test H0: d >= d0 against H1: d < d0 on a one-column series.
    Test {
        /// Integration order under the null.
        #[arg(long, default_value_t = 1.0)]
        d0: f64,
        /// Test level.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Statistic: z1 (n rho) or z2 (t-ratio).
        #[arg(long, value_enum, default_value_t = StatArg::Z2)]
        stat: StatArg,
        /// Augmentation lags for the fractional augmented regression.
        #[arg(long, default_value_t = 0)]
        lags: usize,
        /// Critical-value table CSV; falls back to $FRACDF_TABLE, then the
        /// bundled table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Generate an FI(d) Gaussian sample, one value per line.
    Simulate {
        #[arg(long)]
        d: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Innovation standard deviation.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Apply the fractional difference (1-L)^d to a one-column series.
    Fracdiff {
        #[arg(long)]
        d: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Calibrate critical values by simulation under the least favorable
    /// null and emit the table CSV.
    Calibrate {
        #[arg(long, value_enum, default_value_t = StatOrBoth::Both)]
        stat: StatOrBoth,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,250,500,1000,5000")]
        n_grid: Vec<usize>,
        /// Comma-separated test levels.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.025,0.05,0.1")]
        alpha_grid: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        #[arg(long, default_value_t = 20260810)]
        seed: u64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Run size/power experiments from a JSON configuration file (or the
    /// bundled "tables_1_4" reproducing the published tables).
    Mc {
        /// Path to a JSON config, or the literal name tables_1_4.
        #[arg(long)]
        config: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Kernel density estimate (Gaussian kernel, Silverman bandwidth) of a
    /// one-column sample.
    Density {
        /// Number of evaluation points.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Fit phi over a grid of true orders d against a fixed null order d0,
    /// reusing one innovation path.
    Sweep {
        #[arg(long)]
        d0: f64,
        #[arg(long)]
        d_min: f64,
        #[arg(long)]
        d_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: IoArgs,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_UNREADABLE,
        Error::TooShort { n: 0, .. } => EXIT_UNREADABLE,
        Error::Parse { .. } | Error::Csv(_) => EXIT_PARSE,
        Error::TooShort { .. }
        | Error::DegenerateRegression { .. }
        | Error::RankDeficient { .. }
        | Error::DegenerateSample { .. } => EXIT_DEGENERATE,
        Error::NonFinite { .. }
        | Error::InvalidParam { .. }
        | Error::InvalidConfig { .. }
        | Error::InsufficientReplications { .. }
        | Error::TableCoverage { .. }
        | Error::Json(_) => EXIT_USAGE,
    }
}

/// Parses and runs a full command line (including argv[0]); returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output on stdout with status 0.
            if e.use_stderr() {
                eprint!("{e}");
                return EXIT_USAGE;
            }
            print!("{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Test {
            d0,
            alpha,
            stat,
            lags,
            table,
            io,
        } => cmd_test(d0, alpha, stat.into(), lags, table.as_deref(), &io),
        Command::Simulate { d, n, seed, sigma, io } => cmd_simulate(d, n, seed, sigma, &io),
        Command::Fracdiff { d, io } => cmd_fracdiff(d, &io),
        Command::Calibrate {
            stat,
            n_grid,
            alpha_grid,
            reps,
            seed,
            io,
        } => cmd_calibrate(stat, &n_grid, &alpha_grid, reps, seed, &io),
        Command::Mc {
            config,
            format,
            table,
            io,
        } => cmd_mc(&config, format, table.as_deref(), &io),
        Command::Density { grid, io } => cmd_density(grid, &io),
        Command::Sweep {
            d0,
            d_min,
            d_max,
            step,
            n,
            seed,
            io,
        } => cmd_sweep(d0, d_min, d_max, step, n, seed, &io),
    }
}

// ---------------------------------------------------------------------------
// I/O helpers
// ---------------------------------------------------------------------------

fn open_input(io: &IoArgs) -> Result<Box<dyn BufRead>> {
    match &io.input {
        Some(path) => {
            let f = File::open(path).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            })?;
            Ok(Box::new(BufReader::new(f)))
        }
        None => Ok(Box::new(BufReader::new(std::io::stdin()))),
    }
}

fn open_output(io: &IoArgs) -> Result<Box<dyn Write>> {
    match &io.output {
        Some(path) => {
            let f = File::create(path).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(std::io::stdout()))),
    }
}

/// Reads a one-value-per-line series. A non-numeric first line is accepted as
/// a header; anything non-numeric after that, including blank or NaN rows, is
/// a parse error (silently skipping rows would corrupt the statistics).
fn read_series<R: BufRead>(reader: R) -> Result<TimeSeries> {
    let mut values = Vec::new();
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        match trimmed.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("non-finite value {v}"),
                })
            }
            Err(_) => {
                if idx == 0 && !trimmed.is_empty() && !saw_header {
                    saw_header = true;
                    continue;
                }
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected a number, got {trimmed:?}"),
                });
            }
        }
    }
    if values.is_empty() {
        return Err(Error::TooShort { n: 0, min: 1 });
    }
    TimeSeries::new(values)
}

fn write_series<W: Write>(mut w: W, series: &TimeSeries) -> Result<()> {
    for v in series.values() {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Resolves the critical-value table: explicit path, then $FRACDF_TABLE,
/// then the bundled table.
fn load_table(explicit: Option<&Path>, statistic: Statistic) -> Result<crate::fdftest::CriticalValueTable> {
    let path = explicit
        .map(|p| p.to_path_buf())
        .or_else(|| std::env::var_os(TABLE_ENV_VAR).map(PathBuf::from));
    match path {
        Some(p) => {
            let f = File::open(&p).map_err(|e| {
                Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
            })?;
            read_tables_csv(BufReader::new(f))?
                .into_iter()
                .find(|t| t.statistic == statistic)
                .ok_or_else(|| Error::TableCoverage {
                    what: format!("statistic {statistic} in {}", p.display()),
                })
        }
        None => Ok(bundled_table(statistic)),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_test(
    d0: f64,
    alpha: f64,
    statistic: Statistic,
    lags: usize,
    table_path: Option<&Path>,
    io: &IoArgs,
) -> Result<i32> {
    if !d0.is_finite() {
        return Err(Error::NonFinite { what: "d0" });
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParam {
            what: "alpha",
            message: format!("test level {alpha} outside (0, 0.5)"),
        });
    }
    let table = load_table(table_path, statistic)?;
    let series = read_series(open_input(io)?)?;
    let outcome = fdf_test(&series, d0, alpha, statistic, &table, lags)?;

    let mut out = open_output(io)?;
    writeln!(out, "n: {}", outcome.fit.n)?;
    writeln!(out, "statistic: {}", outcome.statistic_used)?;
    writeln!(out, "value: {}", outcome.value)?;
    writeln!(
        out,
        "critical_value: {} (alpha = {})",
        outcome.critical_value, outcome.alpha
    )?;
    writeln!(out, "rho_hat: {}", outcome.fit.rho_hat)?;
    writeln!(out, "phi_hat: {}", outcome.fit.phi_hat)?;
    writeln!(out, "s2: {}", outcome.fit.s2)?;
    for (j, a) in outcome.fit.lag_coeffs.iter().enumerate() {
        writeln!(out, "lag_coeff[{}]: {}", j + 1, a)?;
    }
    writeln!(
        out,
        "decision: {}",
        if outcome.reject {
            format!("reject H0: d >= {d0}")
        } else {
            format!("fail to reject H0: d >= {d0}")
        }
    )?;
    out.flush()?;
    Ok(if outcome.reject { EXIT_REJECT } else { EXIT_OK })
}

fn cmd_simulate(d: f64, n: usize, seed: u64, sigma: f64, io: &IoArgs) -> Result<i32> {
    if !d.is_finite() {
        return Err(Error::NonFinite { what: "d" });
    }
    if n < 1 {
        return Err(Error::InvalidParam {
            what: "n",
            message: "need n >= 1".into(),
        });
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParam {
            what: "sigma",
            message: format!("standard deviation {sigma} must be positive"),
        });
    }
    let mut rng = substream(seed, &[]);
    let u: Vec<f64> = (0..n)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let series = generate_fi(d, &TimeSeries::new(u)?)?;
    write_series(open_output(io)?, &series)?;
    Ok(EXIT_OK)
}

fn cmd_fracdiff(d: f64, io: &IoArgs) -> Result<i32> {
    if !d.is_finite() {
        return Err(Error::NonFinite { what: "d" });
    }
    let series = read_series(open_input(io)?)?;
    let out = frac_diff_auto(&series, d)?;
    write_series(open_output(io)?, &out)?;
    Ok(EXIT_OK)
}

fn cmd_calibrate(
    stat: StatOrBoth,
    n_grid: &[usize],
    alpha_grid: &[f64],
    reps: usize,
    seed: u64,
    io: &IoArgs,
) -> Result<i32> {
    let stats: &[Statistic] = match stat {
        StatOrBoth::Z1 => &[Statistic::Z1],
        StatOrBoth::Z2 => &[Statistic::Z2],
        StatOrBoth::Both => &[Statistic::Z1, Statistic::Z2],
    };
    let tables = calibrate_tables(stats, n_grid, alpha_grid, reps, seed)?;
    write_tables_csv(&tables, open_output(io)?)?;
    Ok(EXIT_OK)
}

fn load_mc_configs(spec: &str) -> Result<Vec<McConfig>> {
    #[derive(serde::Deserialize)]
    struct Runs {
        runs: Vec<McConfig>,
    }
    let text = if spec == TABLES_1_4 {
        include_str!("../data/tables_1_4.json").to_string()
    } else {
        let mut buf = String::new();
        File::open(spec)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{spec}: {e}"))))?
            .read_to_string(&mut buf)?;
        buf
    };
    // Accept either {"runs": [...]} or a single run object; serde_json errors
    // carry line/column context.
    let configs = match serde_json::from_str::<Runs>(&text) {
        Ok(r) => r.runs,
        Err(_) => vec![serde_json::from_str::<McConfig>(&text)?],
    };
    let mut violations = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        if let Err(Error::InvalidConfig { violations: v }) = c.validate() {
            violations.extend(v.into_iter().map(|m| format!("runs[{i}].{m}")));
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidConfig { violations });
    }
    Ok(configs)
}

fn cmd_mc(config: &str, format: Format, table_path: Option<&Path>, io: &IoArgs) -> Result<i32> {
    let configs = load_mc_configs(config)?;
    let mut reports: Vec<McReport> = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let table = load_table(table_path, cfg.statistic)?;
        let report = run_size_power(cfg, &table)?;
        eprintln!(
            "run d={} n={} reps={}: {} cells in {:.1}s",
            cfg.d_true,
            cfg.n,
            cfg.replications,
            report.cells.len(),
            report.elapsed_secs
        );
        reports.push(report);
    }
    let mut out = open_output(io)?;
    match format {
        Format::Csv => {
            // One header, all runs concatenated.
            let merged = McReport {
                config: reports[0].config.clone(),
                cells: reports.iter().flat_map(|r| r.cells.clone()).collect(),
                samples: None,
                elapsed_secs: reports.iter().map(|r| r.elapsed_secs).sum(),
            };
            write_report_csv(&merged, &mut out)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &reports)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_density(grid: usize, io: &IoArgs) -> Result<i32> {
    let series = read_series(open_input(io)?)?;
    let density = kernel_density(series.values(), grid)?;
    let mut out = open_output(io)?;
    write_density_csv(&density, &mut out)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(
    d0: f64,
    d_min: f64,
    d_max: f64,
    step: f64,
    n: usize,
    seed: u64,
    io: &IoArgs,
) -> Result<i32> {
    let points = run_phi_sweep(d_min, d_max, step, d0, n, seed)?;
    write_sweep_csv(&points, open_output(io)?)?;
    Ok(EXIT_OK)
}
