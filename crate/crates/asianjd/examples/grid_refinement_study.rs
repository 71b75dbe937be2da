//! Convergence in the finite-difference lattice.
//!
//! Crank-Nicolson is second order in both time and space, so refining
//! `(time_steps, space_steps)` by 2-2.5x per level should shrink the
//! successive price changes by roughly a factor four.
//!
//! ```bash
//! cargo run --release --example grid_refinement_study
//! ```

use asianjd::commands::{convergence_command, kou_benchmark};
use asianjd::studies::Sweep;

fn main() -> asianjd::Result<()> {
    let mut cfg = kou_benchmark(0.2, 90.0, 1.0);
    cfg.quadrature.intervals = 1000; // keep the jump integral out of the way
    let sweep = Sweep::GridRefinement(vec![(10, 40), (25, 100), (50, 200), (100, 400)]);
    let study = convergence_command(&cfg, &sweep, false)?;
    println!("{:>14} {:>10} {:>10} {:>9}", "(M, K)", "call", "change", "seconds");
    for p in &study.points {
        println!(
            "{:>14} {:>10.4} {:>10} {:>9.2}",
            format!("({})", p.label),
            p.call_price.unwrap(),
            p.change.map(|c| format!("{c:.4}")).unwrap_or_else(|| "-".into()),
            p.call_seconds.unwrap(),
        );
    }
    Ok(())
}
