//! Command-level operations behind the CLI subcommands: single pricing runs,
//! parity pairs, Monte Carlo benchmarks, convergence studies and the full
//! benchmark-table suite.

use std::path::Path;
use std::time::Instant;

use crate::config::{Domain, GridSpec, QuadratureSpec, RunConfig};
use crate::contract::OptionContract;
use crate::error::{Error, Result};
use crate::iteration::{solve, IterationConfig};
use crate::jump_models::JumpModel;
use crate::montecarlo::{simulate_price, McConfig, McResult};
use crate::pde_engine::{check_positivity, SorConfig};
use crate::report::{to_csv, CsvRecord, PriceReport};
use crate::studies::{grid_study, quadrature_study, truncation_study, Study, Sweep};

/// Sizes the global worker pool; call once at startup. Returns an error only
/// for a zero thread count.
pub fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::invalid("threads", "must be at least 1"));
        }
        // a second call in the same process is a no-op; fine for a CLI
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Prices the configured contract with the fixed-point engine.
pub fn price_command(cfg: &RunConfig) -> Result<PriceReport> {
    let contract = cfg.contract;
    let model = cfg.model_or_placeholder();
    let constants = model.compensator(contract.jump_intensity)?;
    let grid = cfg.build_grid()?;
    let quad = cfg.build_quadrature()?;
    let positivity = check_positivity(&grid, &contract, &constants);
    if cfg.grid.enforce_positivity && !positivity.holds {
        return Err(Error::invalid(
            "grid",
            format!(
                "coefficient positivity violated at {} interior nodes \
                 (min p+ {:.3e}, min p- {:.3e}, min 1-p0 {:.3e}); refine dt/dz \
                 or drop grid.enforce_positivity",
                positivity.violations,
                positivity.min_upper,
                positivity.min_lower,
                positivity.min_explicit_center
            ),
        ));
    }
    let started = Instant::now();
    let (surface, iteration_report) =
        solve(&contract, &constants, &quad, &grid, &cfg.iteration, &cfg.sor)?;
    let price = contract.price_from_surface(&surface)?;
    Ok(PriceReport {
        config_id: cfg.config_id.clone(),
        payoff_sign: contract.payoff_sign,
        sigma: contract.volatility,
        fixed_strike: contract.fixed_strike,
        lambda: contract.jump_intensity,
        price,
        parity_gap: contract.parity_gap(),
        c_minus_p: None,
        mc: None,
        iterations: iteration_report.iterations,
        seconds: started.elapsed().as_secs_f64(),
        config_echo: cfg.echo(),
        positivity,
        iteration_report,
    })
}

/// Call-put pair priced with identical numerics.
#[derive(Debug, Clone)]
pub struct ParityOutcome {
    pub call: PriceReport,
    pub put: PriceReport,
    /// `(C - P) - parity_gap`; the model-free identity makes this a direct
    /// measure of numerical error.
    pub residual: f64,
}

/// Prices the call and put twins and reports the parity residual.
pub fn parity_command(cfg: &RunConfig) -> Result<ParityOutcome> {
    let mut call_cfg = cfg.clone();
    call_cfg.contract.payoff_sign = 1;
    call_cfg.config_id = format!("{}_call", cfg.config_id);
    let mut put_cfg = cfg.clone();
    put_cfg.contract.payoff_sign = -1;
    put_cfg.config_id = format!("{}_put", cfg.config_id);

    let mut call = price_command(&call_cfg)?;
    let mut put = price_command(&put_cfg)?;
    let c_minus_p = call.price - put.price;
    call.c_minus_p = Some(c_minus_p);
    put.c_minus_p = Some(c_minus_p);
    let residual = c_minus_p - cfg.contract.parity_gap();
    Ok(ParityOutcome {
        call,
        put,
        residual,
    })
}

/// Monte Carlo benchmark of the configured contract. `full_scale` bumps the
/// sampling to 10^6 paths and 10^3 time steps.
pub fn mc_command(cfg: &RunConfig, full_scale: bool) -> Result<(McResult, CsvRecord)> {
    let mut mc = cfg.mc;
    if full_scale {
        mc.paths = 1_000_000;
        mc.time_steps = 1_000;
    }
    let model = cfg.model_or_placeholder();
    let result = simulate_price(&cfg.contract, &model, &mc)?;
    let record = CsvRecord {
        config_id: cfg.config_id.clone(),
        zeta: cfg.contract.payoff_sign,
        sigma: cfg.contract.volatility,
        fixed_strike: cfg.contract.fixed_strike,
        lambda: cfg.contract.jump_intensity,
        // an MC-only run reports the simulated price in the price column too
        price: result.price,
        parity_gap: cfg.contract.parity_gap(),
        c_minus_p: None,
        mc_price: Some(result.price),
        mc_stderr: Some(result.std_error),
        iterations: 0,
        seconds: result.seconds,
    };
    Ok((result, record))
}

/// Runs one convergence study. With `keep_going`, failed sweep points are
/// recorded in the study and do not abort it; otherwise the first failure
/// is returned as an error.
pub fn convergence_command(cfg: &RunConfig, sweep: &Sweep, keep_going: bool) -> Result<Study> {
    let study = match sweep {
        Sweep::Truncation(levels) => truncation_study(cfg, levels)?,
        Sweep::QuadratureIntervals(counts) => quadrature_study(cfg, counts)?,
        Sweep::GridRefinement(shapes) => grid_study(cfg, shapes)?,
    };
    if !keep_going {
        if let Some(p) = study.points.iter().find(|p| p.error.is_some()) {
            return Err(Error::Config {
                location: format!("sweep point {}", p.label),
                reason: p.error.clone().unwrap(),
            });
        }
    }
    Ok(study)
}

/// Desk-scale benchmark configuration for the double-exponential model
/// (`p = 0.6`, `up = down = 25`, `r = 0.15`, `S0 = 100`, `T = 1`).
pub fn kou_benchmark(sigma: f64, fixed_strike: f64, lambda: f64) -> RunConfig {
    let contract =
        OptionContract::call(0.0, fixed_strike, 1.0, 0.15, sigma, lambda, 100.0).unwrap();
    RunConfig {
        config_id: format!("kou_s{sigma}_k{fixed_strike}_l{lambda}"),
        contract,
        model: Some(JumpModel::double_exponential(0.6, 25.0, 25.0).unwrap()),
        grid: GridSpec {
            domain: Domain::HalfWidth(0.5),
            space_steps: 400,
            time_steps: 100,
            enforce_positivity: false,
        },
        quadrature: QuadratureSpec {
            truncation: Some(10.0),
            intervals: 500,
        },
        iteration: IterationConfig::default(),
        sor: SorConfig::default(),
        mc: McConfig::default(),
    }
}

/// Desk-scale benchmark configuration for the normal jump model
/// (`location = -0.1`, `scale = 0.3`, `lambda = 1`).
pub fn merton_benchmark(sigma: f64, fixed_strike: f64) -> RunConfig {
    let contract = OptionContract::call(0.0, fixed_strike, 1.0, 0.15, sigma, 1.0, 100.0).unwrap();
    RunConfig {
        config_id: format!("merton_s{sigma}_k{fixed_strike}"),
        contract,
        model: Some(JumpModel::log_normal(-0.1, 0.3).unwrap()),
        grid: GridSpec {
            domain: Domain::HalfWidth(0.5),
            space_steps: 400,
            time_steps: 100,
            enforce_positivity: false,
        },
        quadrature: QuadratureSpec {
            truncation: Some(6.0),
            intervals: 500,
        },
        iteration: IterationConfig::default(),
        sor: SorConfig::default(),
        mc: McConfig::default(),
    }
}

/// The `(sigma, K2, lambda)` rows of the double-exponential benchmark grid.
pub const KOU_BENCHMARK_ROWS: [(f64, f64, f64); 12] = [
    (0.1, 90.0, 1.0),
    (0.1, 90.0, 3.0),
    (0.1, 100.0, 1.0),
    (0.1, 100.0, 3.0),
    (0.1, 110.0, 1.0),
    (0.1, 110.0, 3.0),
    (0.2, 90.0, 1.0),
    (0.2, 90.0, 3.0),
    (0.2, 100.0, 1.0),
    (0.2, 100.0, 3.0),
    (0.2, 110.0, 1.0),
    (0.2, 110.0, 3.0),
];

/// The `(sigma, K2)` rows of the normal-jump benchmark grid.
pub const MERTON_BENCHMARK_ROWS: [(f64, f64); 6] = [
    (0.1, 90.0),
    (0.1, 100.0),
    (0.1, 110.0),
    (0.2, 90.0),
    (0.2, 100.0),
    (0.2, 110.0),
];

/// Files written by [`tables_command`].
#[derive(Debug, Clone)]
pub struct TablesSummary {
    pub written: Vec<std::path::PathBuf>,
}

/// Runs the full benchmark reproduction suite: both model grids with parity
/// and Monte Carlo cross-checks, plus the three convergence studies around
/// the `sigma = 0.2, K2 = 90, lambda = 1` row. Writes one CSV per table
/// into `out_dir`.
pub fn tables_command(
    out_dir: &Path,
    full_scale: bool,
    seed: Option<u64>,
    keep_going: bool,
) -> Result<TablesSummary> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let pair_records = |cfg: &mut RunConfig| -> Result<Vec<CsvRecord>> {
        if let Some(s) = seed {
            cfg.mc.seed = s;
        }
        let outcome = parity_command(cfg)?;
        let (mc, _) = mc_command(cfg, full_scale)?;
        let mut call = outcome.call.record();
        call.mc_price = Some(mc.price);
        call.mc_stderr = Some(mc.std_error);
        Ok(vec![call, outcome.put.record()])
    };

    let mut table1 = Vec::new();
    for (sigma, k2, lambda) in KOU_BENCHMARK_ROWS {
        let mut cfg = kou_benchmark(sigma, k2, lambda);
        match pair_records(&mut cfg) {
            Ok(mut rows) => table1.append(&mut rows),
            Err(e) if keep_going => eprintln!("table1 {}: {e}", cfg.config_id),
            Err(e) => return Err(e),
        }
    }
    let path = out_dir.join("table1.csv");
    std::fs::write(&path, to_csv(&table1))?;
    written.push(path);

    let mut table2 = Vec::new();
    for (sigma, k2) in MERTON_BENCHMARK_ROWS {
        let mut cfg = merton_benchmark(sigma, k2);
        match pair_records(&mut cfg) {
            Ok(mut rows) => table2.append(&mut rows),
            Err(e) if keep_going => eprintln!("table2 {}: {e}", cfg.config_id),
            Err(e) => return Err(e),
        }
    }
    let path = out_dir.join("table2.csv");
    std::fs::write(&path, to_csv(&table2))?;
    written.push(path);

    let row7 = kou_benchmark(0.2, 90.0, 1.0);
    let studies: [(&str, Sweep); 3] = [
        ("table3.csv", Sweep::Truncation(vec![5.0, 8.0, 10.0, 12.0, 15.0])),
        (
            "table4.csv",
            Sweep::QuadratureIntervals(vec![200, 300, 400, 500, 600, 700, 800]),
        ),
        (
            "table5.csv",
            Sweep::GridRefinement(vec![(10, 40), (25, 100), (50, 200), (100, 400)]),
        ),
    ];
    for (name, sweep) in studies {
        let mut cfg = row7.clone();
        if name == "table5.csv" {
            cfg.quadrature.intervals = 1000;
        }
        let study = convergence_command(&cfg, &sweep, keep_going)?;
        let path = out_dir.join(name);
        std::fs::write(&path, study.to_csv())?;
        written.push(path);
    }

    Ok(TablesSummary { written })
}
