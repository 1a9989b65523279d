//! The closed-form limiting constants and their simulation check: partial
//! sums of fractional noise scale like kappa^2 n^{1+2 delta}.
//!
//! ```bash
//! cargo run --release --example asymptotic_constants
//! ```

use fracdf::asymp::{kappa_squared, partial_sum_variance_check, var_delta_x};
use fracdf::Result;

fn main() -> Result<()> {
    println!("{:>8} {:>12} {:>12}", "delta", "kappa^2", "var(dx)");
    for k in -4..=4 {
        let delta = k as f64 / 10.0;
        println!(
            "{delta:>8.1} {:>12.6} {:>12.6}",
            kappa_squared(delta, 1.0)?,
            var_delta_x(delta, 1.0)?
        );
    }
    println!(
        "{:>8} {:>12} {:>12}   (boundary cases)",
        0.5,
        kappa_squared(0.5, 1.0)?,
        "-"
    );
    println!(
        "{:>8} {:>12} {:>12}",
        -0.5,
        "-",
        var_delta_x(-0.5, 1.0)?
    );

    println!("\nMonte Carlo check of the partial-sum scaling (n = 2048, 800 reps):");
    for delta in [-0.4, -0.25, 0.0] {
        let r = partial_sum_variance_check(delta, 1.0, 2048, 800, 5)?;
        println!(
            "  delta = {delta:>5}: empirical {:.4}, theoretical {:.4}, ratio {:.3} (band +/-{:.0}%)",
            r.empirical,
            r.theoretical,
            r.ratio,
            100.0 * r.tolerance_band
        );
    }
    Ok(())
}
