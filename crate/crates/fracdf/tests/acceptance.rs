//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Monte Carlo checks pin their seeds, so every run is reproducible.

use std::time::Instant;

use fracdf::asymp::{kappa_squared, partial_sum_variance_check, var_delta_x};
use fracdf::fdftest::{calibrate_critical_values, lookup_critical};
use fracdf::fracdiff::{frac_diff, frac_diff_fft, generate_fi, kernel};
use fracdf::montecarlo::{simulate_statistics, two_sample_ks};
use fracdf::rng::substream;
use fracdf::{bundled_table, Statistic, TimeSeries};
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    eprintln!(
        "ACCEPTANCE {id:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Rejection rate of the level-alpha Z2 test for y ~ FI(d) tested at d0,
/// using the bundled critical values.
fn rejection_rate(d: f64, d0: f64, n: usize, alpha: f64, reps: usize, seed: u64) -> f64 {
    let table = bundled_table(Statistic::Z2);
    let crit = lookup_critical(&table, n, alpha).expect("table covers cell");
    let stats = simulate_statistics(d, d0, n, reps, seed, Statistic::Z2);
    stats.iter().filter(|&&t| t < crit).count() as f64 / reps as f64
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn c01_table2_size_cell() {
    let start = Instant::now();
    let non_rejection = 100.0 * (1.0 - rejection_rate(1.0, 1.0, 250, 0.05, 10_000, 101));
    let elapsed = start.elapsed().as_secs_f64();
    let pass = (non_rejection - 94.87).abs() <= 1.5 && elapsed < 120.0;
    report(
        1,
        "table2 size cell (n=250, d=d0=1, 5%)",
        pass,
        &format!("non-rejection {non_rejection:.2}% vs 94.87% +/- 1.5pp, {elapsed:.1}s"),
    );
    assert!(pass);
}

#[test]
fn c02_table4_power_cells() {
    let targets = [(1.1, 20.76), (1.2, 51.77), (1.3, 86.05), (1.4, 99.35)];
    let mut detail = String::new();
    let mut pass = true;
    for (d0, want) in targets {
        let got = 100.0 * rejection_rate(1.0, d0, 250, 0.05, 10_000, 102);
        detail.push_str(&format!("delta={:.1}: {got:.2}% vs {want}%; ", 1.0 - d0));
        pass &= (got - want).abs() <= 2.0;
    }
    report(2, "table4 power cells (n=250, d=1, 5%)", pass, detail.trim_end());
    assert!(pass);
}

#[test]
fn c03_table3_power_cell() {
    // 20000 replications halve the Monte Carlo noise on a 63% cell.
    let got = 100.0 * rejection_rate(0.5, 0.8, 50, 0.10, 20_000, 103);
    let pass = (got - 63.23).abs() <= 2.0;
    report(
        3,
        "table3 power cell (n=50, d=0.5, delta=-0.3, 10%)",
        pass,
        &format!("rejection {got:.2}% vs 63.23% +/- 2pp"),
    );
    assert!(pass);
}

#[test]
fn c04_d_invariance_at_fixed_delta() {
    let mut pass = true;
    let mut detail = String::new();
    for delta in [0.0, -0.3] {
        let rates: Vec<f64> = [0.0, 0.5, 1.0]
            .iter()
            .map(|&d| 100.0 * rejection_rate(d, d - delta, 250, 0.05, 20_000, 104))
            .collect();
        for i in 0..rates.len() {
            for j in (i + 1)..rates.len() {
                pass &= (rates[i] - rates[j]).abs() <= 2.0;
            }
        }
        detail.push_str(&format!(
            "delta={delta}: d=0/0.5/1 -> {:.2}/{:.2}/{:.2}%; ",
            rates[0], rates[1], rates[2]
        ));
    }
    report(4, "rejection invariant in d at fixed delta", pass, detail.trim_end());
    assert!(pass);
}

#[test]
fn c05_null_distribution_equivalence() {
    let a = simulate_statistics(0.5, 0.5, 250, 10_000, 105, Statistic::Z2);
    let b = simulate_statistics(1.0, 1.0, 250, 10_000, 105, Statistic::Z2);
    let ks = two_sample_ks(&a, &b);
    let pass = ks < 0.023;
    report(
        5,
        "null Z2 distributions coincide across d (KS)",
        pass,
        &format!("KS {ks:.4} vs 0.023"),
    );
    assert!(pass);
}

#[test]
fn c06_df_critical_value_recovery() {
    // Shipped table entries...
    let table = bundled_table(Statistic::Z2);
    let bundled_5 = lookup_critical(&table, 5000, 0.05).unwrap();
    let bundled_1 = lookup_critical(&table, 5000, 0.01).unwrap();
    // ...and an independent calibration run with a different seed.
    let fresh = calibrate_critical_values(Statistic::Z2, &[5000], &[0.01, 0.05], 50_000, 106)
        .expect("calibration");
    let fresh_5 = lookup_critical(&fresh, 5000, 0.05).unwrap();
    let fresh_1 = lookup_critical(&fresh, 5000, 0.01).unwrap();
    let pass = (bundled_5 + 1.95).abs() <= 0.03
        && (bundled_1 + 2.58).abs() <= 0.05
        && (fresh_5 + 1.95).abs() <= 0.03
        && (fresh_1 + 2.58).abs() <= 0.05;
    report(
        6,
        "asymptotic critical values match Dickey-Fuller",
        pass,
        &format!(
            "bundled 5%/1%: {bundled_5:.4}/{bundled_1:.4}, fresh: {fresh_5:.4}/{fresh_1:.4} \
             vs -1.95 +/- 0.03, -2.58 +/- 0.05"
        ),
    );
    assert!(pass);
}

#[test]
fn c07_closed_form_constants() {
    let mut max_rel: f64 = 0.0;
    for i in 0..50 {
        let delta = -0.49 + 0.98 * (i as f64 + 0.5) / 50.0;
        let k = kappa_squared(delta, 1.0).unwrap();
        let k_direct = gamma(1.0 - 2.0 * delta)
            / ((1.0 + 2.0 * delta) * gamma(1.0 + delta) * gamma(1.0 - delta));
        max_rel = max_rel.max(((k - k_direct) / k_direct).abs());
        let v = var_delta_x(delta, 1.0).unwrap();
        let v_direct = gamma(1.0 - 2.0 * delta) / gamma(1.0 - delta).powi(2);
        max_rel = max_rel.max(((v - v_direct) / v_direct).abs());
    }
    let check = partial_sum_variance_check(-0.25, 1.0, 4096, 2000, 107).unwrap();
    let pass = max_rel <= 1e-12 && (check.ratio - 1.0).abs() <= 0.10;
    report(
        7,
        "closed-form constants and partial-sum variance",
        pass,
        &format!(
            "max gamma-route deviation {max_rel:.2e}; variance ratio {:.4} vs 1 +/- 0.10",
            check.ratio
        ),
    );
    assert!(pass);
}

#[test]
fn c08_operator_algebra() {
    let mut pass = true;
    let mut worst = String::new();

    // Semigroup: kernel(d1) * kernel(d2) = kernel(d1 + d2), 20 seeded pairs.
    let mut rng = substream(108, &[1]);
    let mut semi_err: f64 = 0.0;
    for _ in 0..20 {
        let d1 = rng.gen_range(-1.0..2.0);
        let d2 = rng.gen_range(-1.0..2.0);
        let len = 60;
        let k1 = kernel(d1, len).unwrap();
        let k2 = kernel(d2, len).unwrap();
        let ks = kernel(d1 + d2, len).unwrap();
        for i in 0..len {
            let mut conv = 0.0;
            for j in 0..=i {
                conv += k1.coeffs()[j] * k2.coeffs()[i - j];
            }
            semi_err = semi_err.max((conv - ks.coeffs()[i]).abs());
        }
    }
    pass &= semi_err <= 1e-10;
    worst.push_str(&format!("semigroup {semi_err:.2e}; "));

    // Inversion.
    let mut inv_err: f64 = 0.0;
    for d in [0.1f64, 0.5, 1.0, 1.4] {
        let mut rng = substream(108, &[2, d.to_bits()]);
        let u = TimeSeries::new((0..500).map(|_| rng.sample(StandardNormal)).collect()).unwrap();
        let back = frac_diff(&generate_fi(d, &u).unwrap(), d).unwrap();
        for (a, b) in back.values().iter().zip(u.values()) {
            inv_err = inv_err.max((a - b).abs());
        }
    }
    pass &= inv_err <= 1e-9;
    worst.push_str(&format!("inversion {inv_err:.2e}; "));

    // Linearity.
    let mut rng = substream(108, &[3]);
    let y = TimeSeries::new((0..300).map(|_| rng.sample(StandardNormal)).collect::<Vec<f64>>())
        .unwrap();
    let z = TimeSeries::new((0..300).map(|_| rng.sample(StandardNormal)).collect::<Vec<f64>>())
        .unwrap();
    let (a, b) = (1.7, -0.6);
    let combo = TimeSeries::new(
        y.values()
            .iter()
            .zip(z.values())
            .map(|(yi, zi)| a * yi + b * zi)
            .collect(),
    )
    .unwrap();
    let lhs = frac_diff(&combo, 0.4).unwrap();
    let fy = frac_diff(&y, 0.4).unwrap();
    let fz = frac_diff(&z, 0.4).unwrap();
    let mut lin_err: f64 = 0.0;
    for i in 0..300 {
        lin_err = lin_err.max((lhs.values()[i] - (a * fy.values()[i] + b * fz.values()[i])).abs());
    }
    pass &= lin_err <= 1e-10;
    worst.push_str(&format!("linearity {lin_err:.2e}; "));

    // FFT vs direct.
    let mut rng = substream(108, &[4]);
    let w = TimeSeries::new((0..1000).map(|_| rng.sample(StandardNormal)).collect::<Vec<f64>>())
        .unwrap();
    let direct = frac_diff(&w, 0.5).unwrap();
    let fast = frac_diff_fft(&w, 0.5).unwrap();
    let mut fft_err: f64 = 0.0;
    for (x, yv) in direct.values().iter().zip(fast.values()) {
        fft_err = fft_err.max((x - yv).abs());
    }
    pass &= fft_err <= 1e-8;
    worst.push_str(&format!("fft-vs-direct {fft_err:.2e}"));

    report(8, "operator algebra suite", pass, &worst);
    assert!(pass);
}

#[test]
fn c09_rate_signatures() {
    let ns = [250usize, 500, 1000, 2000, 4000];
    let mut pass = true;
    let mut detail = String::new();
    for (delta, want, tol) in [(-0.25, -0.5, 0.15), (0.0, -1.0, 0.15), (0.3, -1.0, 0.10)] {
        let mut logs = Vec::new();
        for &n in &ns {
            let z1 = simulate_statistics(1.0, 1.0 - delta, n, 500, 109, Statistic::Z1);
            let med = median(z1.iter().map(|v| (v / n as f64).abs()).collect());
            logs.push(((n as f64).ln(), med.ln()));
        }
        // Least-squares slope of log median |rho| on log n.
        let m = logs.len() as f64;
        let sx: f64 = logs.iter().map(|p| p.0).sum();
        let sy: f64 = logs.iter().map(|p| p.1).sum();
        let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        pass &= (slope - want).abs() <= tol;
        detail.push_str(&format!("delta={delta}: slope {slope:.3} vs {want} +/- {tol}; "));
    }
    report(9, "convergence-rate exponents of rho", pass, detail.trim_end());
    assert!(pass);
}

#[test]
fn c10_divergence_direction() {
    let t_250 = median(simulate_statistics(1.0, 1.25, 250, 2000, 110, Statistic::Z2));
    let t_2000 = median(simulate_statistics(1.0, 1.25, 2000, 1000, 110, Statistic::Z2));
    let pass = t_2000 < t_250 && t_250 < 0.0;
    report(
        10,
        "t diverges to -infinity under the alternative",
        pass,
        &format!("median t: n=250 -> {t_250:.3}, n=2000 -> {t_2000:.3}"),
    );
    assert!(pass);
}
