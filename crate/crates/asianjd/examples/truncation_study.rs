//! Convergence in the truncation of the jump integral.
//!
//! The log-jump support is cut to `[-N/down_rate, N/up_rate]` (tail mass
//! `e^{-N}`); the sweep widens the cut while keeping the inner quadrature
//! nodes fixed, so rows differ only by the truncation error.
//!
//! ```bash
//! cargo run --release --example truncation_study
//! ```

use asianjd::commands::{convergence_command, kou_benchmark};
use asianjd::studies::Sweep;

fn main() -> asianjd::Result<()> {
    let cfg = kou_benchmark(0.2, 90.0, 1.0);
    let sweep = Sweep::Truncation(vec![5.0, 8.0, 10.0, 12.0, 15.0]);
    let study = convergence_command(&cfg, &sweep, false)?;
    println!("{:>4} {:>10} {:>10} {:>11} {:>10}", "N", "call", "put", "residual", "tail mass");
    for p in &study.points {
        let n: f64 = p.label.parse().unwrap();
        println!(
            "{:>4} {:>10.4} {:>10.4} {:>+11.5} {:>10.2e}",
            p.label,
            p.call_price.unwrap(),
            p.put_price.unwrap(),
            p.parity_residual.unwrap(),
            (-n).exp(),
        );
    }
    println!("\nCSV layout:\n{}", study.to_csv());
    Ok(())
}
