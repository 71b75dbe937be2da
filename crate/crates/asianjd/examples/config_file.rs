//! Drive a run from a config file and emit the CSV report row, mirroring
//! what the `asianjd price` subcommand does.
//!
//! ```bash
//! cargo run --release --example config_file
//! ```

use std::path::Path;

use asianjd::commands::price_command;
use asianjd::config::RunConfig;
use asianjd::report::CSV_HEADER;

fn main() -> asianjd::Result<()> {
    let path = Path::new("crates/asianjd/examples/configs/kou_call.conf");
    // examples may run from the workspace root or the crate directory
    let path = if path.exists() {
        path.to_path_buf()
    } else {
        Path::new("examples/configs/kou_call.conf").to_path_buf()
    };
    let cfg = RunConfig::from_file(&path)?;
    let report = price_command(&cfg)?;

    println!("{CSV_HEADER}");
    println!("{}", report.record().to_line());

    eprintln!("\nconfig echo (replays this run bit for bit):");
    eprintln!("{}", report.config_echo);
    Ok(())
}
