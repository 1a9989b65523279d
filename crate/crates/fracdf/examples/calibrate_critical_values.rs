//! Calibrate critical values by simulation under the least favorable null
//! and print the table CSV on stdout.
//!
//! This is a reduced run for demonstration; the bundled table was produced
//! by the same code path at 200000 replications (see the fracdf `calibrate`
//! subcommand).
//!
//! ```bash
//! cargo run --release --example calibrate_critical_values
//! ```

use fracdf::fdftest::{calibrate_tables, write_tables_csv};
use fracdf::{Result, Statistic};

fn main() -> Result<()> {
    let tables = calibrate_tables(
        &[Statistic::Z1, Statistic::Z2],
        &[50, 100, 250],
        &[0.01, 0.05, 0.10],
        20_000,
        7,
    )?;
    write_tables_csv(&tables, std::io::stdout().lock())?;
    eprintln!("note: z2 rows should sit near the familiar -2.6 / -1.95 / -1.6 ladder");
    Ok(())
}
