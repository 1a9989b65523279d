//! Reproduce the size and power tables of the test with the Monte Carlo
//! engine. Defaults to 2000 replications per cell so the run stays quick;
//! pass a replication count for publication-grade accuracy:
//!
//! ```bash
//! cargo run --release --example reproduce_size_power_tables -- 10000
//! ```
//!
//! The full six-table sweep is also available through the CLI:
//! `fracdf mc --config tables_1_4`.

use fracdf::montecarlo::run_size_power;
use fracdf::{bundled_table, McConfig, Result, Statistic};

fn main() -> Result<()> {
    let replications: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("replication count"))
        .unwrap_or(2000);

    let table = bundled_table(Statistic::Z2);
    for (d_true, n) in [(1.0, 50usize), (1.0, 250)] {
        let config = McConfig {
            d_true,
            d0_grid: (-4..=4).map(|k| d_true + k as f64 / 10.0).collect(),
            n,
            replications,
            alpha_grid: vec![0.01, 0.05, 0.10],
            seed: 99,
            statistic: Statistic::Z2,
            keep_samples: false,
        };
        let report = run_size_power(&config, &table)?;
        println!(
            "d = {d_true}, n = {n}, {replications} replications ({:.1}s)",
            report.elapsed_secs
        );
        println!(
            "{:>6} {:>6} {:>6} {:>10} {:>10}",
            "delta", "d0", "alpha", "freq(%)", "kind"
        );
        for c in &report.cells {
            println!(
                "{:>6.1} {:>6.1} {:>6.2} {:>10.2} {:>10}",
                c.delta,
                c.d0,
                c.alpha,
                100.0 * c.frequency,
                c.kind
            );
        }
        println!();
    }
    Ok(())
}
