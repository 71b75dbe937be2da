//! Convergence in the quadrature refinement of the jump integral.
//!
//! The parity residual `(C - P) - parity` is a direct, model-free gauge of
//! the quadrature error; it should fall monotonically as the log-jump grid
//! is refined.
//!
//! ```bash
//! cargo run --release --example quadrature_study
//! ```

use asianjd::commands::{convergence_command, kou_benchmark};
use asianjd::studies::Sweep;

fn main() -> asianjd::Result<()> {
    let cfg = kou_benchmark(0.2, 90.0, 1.0);
    let sweep = Sweep::QuadratureIntervals(vec![200, 300, 400, 500, 600, 700, 800]);
    let study = convergence_command(&cfg, &sweep, false)?;
    println!("{:>5} {:>10} {:>10} {:>11}", "L", "call", "put", "residual");
    for p in &study.points {
        println!(
            "{:>5} {:>10.4} {:>10.4} {:>+11.5}",
            p.label,
            p.call_price.unwrap(),
            p.put_price.unwrap(),
            p.parity_residual.unwrap(),
        );
    }
    Ok(())
}
