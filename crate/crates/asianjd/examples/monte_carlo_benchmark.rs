//! Cross-check the PDE engine against the path Monte Carlo benchmark.
//!
//! ```bash
//! cargo run --release --example monte_carlo_benchmark
//! ```

use asianjd::commands::{kou_benchmark, mc_command, merton_benchmark, price_command};

fn main() -> asianjd::Result<()> {
    let configs = [kou_benchmark(0.2, 90.0, 1.0), merton_benchmark(0.1, 100.0)];
    for cfg in configs {
        let pde = price_command(&cfg)?;
        let (mc, _) = mc_command(&cfg, false)?;
        let gap = (pde.price - mc.price).abs();
        println!("{}:", cfg.config_id);
        println!("  PDE engine : {:.4}  ({:.2} s)", pde.price, pde.seconds);
        println!(
            "  Monte Carlo: {:.4} +- {:.4}  ({} paths x {} steps, {:.2} s)",
            mc.price, mc.std_error, mc.paths_used, cfg.mc.time_steps, mc.seconds
        );
        println!(
            "  |gap|      : {:.4} = {:.2} standard errors\n",
            gap,
            gap / mc.std_error
        );
    }
    println!("full-scale sampling (10^6 paths, 10^3 steps) is available via");
    println!("`asianjd mc --config <cfg> --full-scale`");
    Ok(())
}
