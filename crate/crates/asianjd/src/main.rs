//! Thin command-line front end; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use asianjd::commands::{
    configure_threads, convergence_command, mc_command, parity_command, price_command,
    tables_command,
};
use asianjd::config::RunConfig;
use asianjd::report::{to_csv, CSV_HEADER};
use asianjd::studies::Sweep;

#[derive(Parser)]
#[command(
    name = "asianjd",
    about = "Asian option pricing under jump diffusions: fixed-point PIDE engine with Monte Carlo benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the Monte Carlo seed from the config file
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Price the configured contract with the fixed-point engine
    Price {
        #[arg(long)]
        config: PathBuf,
        /// Write the report row as CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Price call and put twins and report the put-call parity residual
    Parity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo benchmark of the configured contract
    Mc {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// 10^6 paths and 10^3 time steps instead of the configured sizes
        #[arg(long)]
        full_scale: bool,
    },
    /// Convergence study over one sweep axis
    Study {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Truncation levels, e.g. 5,8,10,12,15
        #[arg(long, value_delimiter = ',')]
        truncation: Option<Vec<f64>>,
        /// Quadrature interval counts, e.g. 200,400,800
        #[arg(long, value_delimiter = ',')]
        quadrature: Option<Vec<usize>>,
        /// Grid shapes time_steps x space_steps, e.g. 10x40,25x100
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
        /// Record failed sweep points instead of aborting
        #[arg(long)]
        keep_going: bool,
    },
    /// Full benchmark table suite (both models, parity, MC, three studies)
    Tables {
        /// Output directory for table1.csv .. table5.csv
        #[arg(long, default_value = "tables")]
        out: PathBuf,
        #[arg(long)]
        full_scale: bool,
        #[arg(long)]
        keep_going: bool,
    },
}

fn load(config: &PathBuf, seed: Option<u64>) -> asianjd::Result<RunConfig> {
    let mut cfg = RunConfig::from_file(config)?;
    if let Some(s) = seed {
        cfg.mc.seed = s;
    }
    Ok(cfg)
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> asianjd::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_grid_shapes(specs: &[String]) -> asianjd::Result<Vec<(usize, usize)>> {
    specs
        .iter()
        .map(|s| {
            s.split_once('x')
                .and_then(|(m, k)| Some((m.trim().parse().ok()?, k.trim().parse().ok()?)))
                .ok_or_else(|| asianjd::Error::Config {
                    location: "study.grid".into(),
                    reason: format!("expected time_steps x space_steps, got `{s}`"),
                })
        })
        .collect()
}

fn run(cli: Cli) -> asianjd::Result<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Price { config, out } => {
            let cfg = load(&config, cli.seed)?;
            let report = price_command(&cfg)?;
            eprintln!(
                "{}: {} price {:.4} ({} iterations, {:.2} s, parity gap {:.4})",
                report.config_id,
                if report.payoff_sign > 0 { "call" } else { "put" },
                report.price,
                report.iterations,
                report.seconds,
                report.parity_gap,
            );
            if !report.positivity.holds {
                eprintln!(
                    "  note: coefficient positivity violated at {} nodes (expected on production grids)",
                    report.positivity.violations
                );
            }
            write_or_print(
                &out,
                &format!("{CSV_HEADER}\n{}\n", report.record().to_line()),
            )
        }
        Command::Parity { config, out } => {
            let cfg = load(&config, cli.seed)?;
            let outcome = parity_command(&cfg)?;
            eprintln!(
                "{}: C {:.4}  P {:.4}  C-P {:.4}  parity {:.4}  residual {:+.5}",
                cfg.config_id,
                outcome.call.price,
                outcome.put.price,
                outcome.call.price - outcome.put.price,
                cfg.contract.parity_gap(),
                outcome.residual,
            );
            write_or_print(
                &out,
                &to_csv(&[outcome.call.record(), outcome.put.record()]),
            )
        }
        Command::Mc {
            config,
            out,
            full_scale,
        } => {
            let cfg = load(&config, cli.seed)?;
            let (result, record) = mc_command(&cfg, full_scale)?;
            eprintln!(
                "{}: MC price {:.4} +- {:.4} ({} paths, {:.2} s)",
                cfg.config_id, result.price, result.std_error, result.paths_used, result.seconds,
            );
            write_or_print(&out, &format!("{CSV_HEADER}\n{}\n", record.to_line()))
        }
        Command::Study {
            config,
            out,
            truncation,
            quadrature,
            grid,
            keep_going,
        } => {
            let cfg = load(&config, cli.seed)?;
            let sweep = match (truncation, quadrature, grid) {
                (Some(levels), None, None) => Sweep::Truncation(levels),
                (None, Some(counts), None) => Sweep::QuadratureIntervals(counts),
                (None, None, Some(shapes)) => Sweep::GridRefinement(parse_grid_shapes(&shapes)?),
                _ => {
                    return Err(asianjd::Error::Config {
                        location: "study".into(),
                        reason: "give exactly one of --truncation, --quadrature, --grid".into(),
                    })
                }
            };
            let study = convergence_command(&cfg, &sweep, keep_going)?;
            let failed = study.failed_points();
            if failed > 0 {
                eprintln!("{}: {failed} sweep point(s) failed (kept going)", cfg.config_id);
            }
            write_or_print(&out, &study.to_csv())
        }
        Command::Tables {
            out,
            full_scale,
            keep_going,
        } => {
            let summary = tables_command(&out, full_scale, cli.seed, keep_going)?;
            for path in summary.written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
