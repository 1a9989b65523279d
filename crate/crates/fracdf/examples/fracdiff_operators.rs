//! Fractional differencing basics: expansion coefficients, applying
//! (1-L)^d, and the operator algebra that makes the test machinery tick.
//!
//! ```bash
//! cargo run --example fracdiff_operators
//! ```

use fracdf::{frac_diff, generate_fi, kernel, Result, TimeSeries};
use rand::Rng;
use rand_distr::StandardNormal;

fn main() -> Result<()> {
    // Coefficients of (1-L)^d for a few orders. Integer d truncates to the
    // usual binomial pattern; fractional d decays hyperbolically.
    for d in [1.0, 0.5, -0.4] {
        let k = kernel(d, 8)?;
        let formatted: Vec<String> = k.coeffs().iter().map(|c| format!("{c:+.4}")).collect();
        println!("(1-L)^{d:>4}: [{}]", formatted.join(", "));
    }

    let mut rng = fracdf::rng::substream(1, &[]);
    let u = TimeSeries::new((0..500).map(|_| rng.sample(StandardNormal)).collect())?;

    // Semigroup: differencing by 0.3 then 0.7 equals differencing by 1.0.
    let y = generate_fi(0.9, &u)?;
    let two_step = frac_diff(&frac_diff(&y, 0.3)?, 0.7)?;
    let one_step = frac_diff(&y, 1.0)?;
    let gap = two_step
        .values()
        .iter()
        .zip(one_step.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("\nsemigroup: max |Delta^0.7 Delta^0.3 y - Delta^1 y| = {gap:.2e}");

    // Inversion: differencing an FI(d) sample by d returns the innovations.
    let x = generate_fi(0.7, &u)?;
    let back = frac_diff(&x, 0.7)?;
    let gap = back
        .values()
        .iter()
        .zip(u.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("inversion: max |Delta^0.7 FI(0.7)[u] - u| = {gap:.2e}");

    Ok(())
}
