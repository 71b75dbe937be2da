//! Acceptance suite: every shipping criterion asserted at its stated
//! tolerance, one PASS/FAIL line per criterion (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Reference prices come from an established benchmark of the same scheme
//! (double-exponential and normal jump models, desk scale M = 100, K = 400,
//! L = 500). Where a criterion needs an analytic constant, the expected
//! value is frozen from 40-digit arithmetic on the defining formula.

use std::sync::OnceLock;

use asianjd::commands::{
    convergence_command, kou_benchmark, merton_benchmark, parity_command,
    KOU_BENCHMARK_ROWS, MERTON_BENCHMARK_ROWS,
};
use asianjd::config::RunConfig;
use asianjd::montecarlo::{simulate_diagnostics, simulate_price, McConfig};
use asianjd::studies::Sweep;
use asianjd::{
    apply_jump_operator, check_positivity, contraction_factor, solve, IterationConfig,
    JumpModel, OptionContract, SorConfig, SpaceTimeGrid,
};

/// Reference call/put prices for the double-exponential rows
/// (sigma, K2, lambda, call, put).
const KOU_REFERENCE: [(f64, f64, f64, f64, f64); 12] = [
    (0.1, 90.0, 1.0, 15.419, 0.012),
    (0.1, 90.0, 3.0, 15.457, 0.045),
    (0.1, 100.0, 1.0, 7.170, 0.376),
    (0.1, 100.0, 3.0, 7.456, 0.656),
    (0.1, 110.0, 1.0, 1.702, 3.520),
    (0.1, 110.0, 3.0, 2.220, 4.040),
    (0.2, 90.0, 1.0, 15.699, 0.292),
    (0.2, 90.0, 3.0, 15.802, 0.390),
    (0.2, 100.0, 1.0, 8.540, 1.745),
    (0.2, 100.0, 3.0, 8.790, 1.994),
    (0.2, 110.0, 1.0, 3.723, 5.541),
    (0.2, 110.0, 3.0, 4.045, 5.864),
];

/// Reference call/put prices for the normal-jump rows (sigma, K2, call, put).
const MERTON_REFERENCE: [(f64, f64, f64, f64); 6] = [
    (0.1, 90.0, 16.997, 1.601),
    (0.1, 100.0, 10.062, 3.272),
    (0.1, 110.0, 4.836, 6.653),
    (0.2, 90.0, 17.346, 1.950),
    (0.2, 100.0, 10.959, 4.170),
    (0.2, 110.0, 6.303, 8.120),
];

struct PairOutcome {
    call: f64,
    put: f64,
    residual: f64,
    delta_ratios: Vec<f64>,
    contraction_bound: f64,
    seconds: f64,
}

fn run_pair(cfg: &RunConfig) -> PairOutcome {
    let outcome = parity_command(cfg).expect("benchmark run failed");
    PairOutcome {
        call: outcome.call.price,
        put: outcome.put.price,
        residual: outcome.residual,
        delta_ratios: outcome.call.iteration_report.delta_ratios(),
        contraction_bound: outcome.call.iteration_report.contraction_bound,
        seconds: outcome.call.seconds + outcome.put.seconds,
    }
}

fn kou_pairs() -> &'static Vec<PairOutcome> {
    static RESULTS: OnceLock<Vec<PairOutcome>> = OnceLock::new();
    RESULTS.get_or_init(|| {
        KOU_BENCHMARK_ROWS
            .iter()
            .map(|&(sigma, k2, lambda)| run_pair(&kou_benchmark(sigma, k2, lambda)))
            .collect()
    })
}

fn merton_pairs() -> &'static Vec<PairOutcome> {
    static RESULTS: OnceLock<Vec<PairOutcome>> = OnceLock::new();
    RESULTS.get_or_init(|| {
        MERTON_BENCHMARK_ROWS
            .iter()
            .map(|&(sigma, k2)| run_pair(&merton_benchmark(sigma, k2)))
            .collect()
    })
}

fn verdict(name: &str, failures: Vec<String>, detail: String) {
    let ok = failures.is_empty();
    println!(
        "{name}: {} — {}",
        if ok { "PASS" } else { "FAIL" },
        if ok { detail } else { failures.join("; ") }
    );
    assert!(failures.is_empty(), "{name}: {}", failures.join("; "));
}

#[test]
fn criterion_01_double_exponential_price_grid() {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for (row, &(sigma, k2, lambda, ref_call, ref_put)) in
        kou_pairs().iter().zip(KOU_REFERENCE.iter())
    {
        let dc = (row.call - ref_call).abs();
        let dp = (row.put - ref_put).abs();
        worst = worst.max(dc).max(dp);
        slowest = slowest.max(row.seconds / 2.0);
        if dc > 0.02 {
            failures.push(format!(
                "call(s={sigma},K2={k2},l={lambda}) = {:.4} vs {ref_call} (|d|={dc:.4})",
                row.call
            ));
        }
        if dp > 0.02 {
            failures.push(format!(
                "put(s={sigma},K2={k2},l={lambda}) = {:.4} vs {ref_put} (|d|={dp:.4})",
                row.put
            ));
        }
    }
    verdict(
        "criterion 01 (double-exponential grid, 24 prices within 0.02)",
        failures,
        format!("worst |diff| {worst:.4}, slowest row {slowest:.1} s"),
    );
}

#[test]
fn criterion_02_normal_jump_price_grid() {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (row, &(sigma, k2, ref_call, ref_put)) in
        merton_pairs().iter().zip(MERTON_REFERENCE.iter())
    {
        let dc = (row.call - ref_call).abs();
        let dp = (row.put - ref_put).abs();
        worst = worst.max(dc).max(dp);
        if dc > 0.02 {
            failures.push(format!(
                "call(s={sigma},K2={k2}) = {:.4} vs {ref_call} (|d|={dc:.4})",
                row.call
            ));
        }
        if dp > 0.02 {
            failures.push(format!(
                "put(s={sigma},K2={k2}) = {:.4} vs {ref_put} (|d|={dp:.4})",
                row.put
            ));
        }
    }
    verdict(
        "criterion 02 (normal-jump grid, 12 prices within 0.02)",
        failures,
        format!("worst |diff| {worst:.4}"),
    );
}

#[test]
fn criterion_03_parity_within_a_cent() {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (row, &(sigma, k2, lambda)) in kou_pairs().iter().zip(KOU_BENCHMARK_ROWS.iter()) {
        worst = worst.max(row.residual.abs());
        if row.residual.abs() > 0.01 {
            failures.push(format!(
                "kou(s={sigma},K2={k2},l={lambda}) residual {:+.5}",
                row.residual
            ));
        }
    }
    for (row, &(sigma, k2)) in merton_pairs().iter().zip(MERTON_BENCHMARK_ROWS.iter()) {
        worst = worst.max(row.residual.abs());
        if row.residual.abs() > 0.01 {
            failures.push(format!(
                "merton(s={sigma},K2={k2}) residual {:+.5}",
                row.residual
            ));
        }
    }
    verdict(
        "criterion 03 (put-call parity within 0.01 on every pair)",
        failures,
        format!("worst |residual| {worst:.5}"),
    );
}

#[test]
fn criterion_04_truncation_study() {
    // The reference implementation reports 15.6995 at N = 10, 12 and 15 with
    // a parity residual of +0.0098; its own parity column therefore puts a
    // ~+0.01 quadrature bias inside those call prices. This engine's
    // quadrature (cusp-split trapezoid on the power-map grid) prices the
    // same configuration with a residual of -0.0003, so its N = 10 call
    // lands ~0.007 below the biased reference window, and the N = 12 -> 15
    // step keeps the genuine tail effect (~1.8e-4: the added jump mass times
    // the price sensitivity) that the reference tables do not show. Both
    // clauses are asserted as specified; see the decisions ledger for the
    // infeasibility analysis (matching the window while keeping parity
    // within 0.01 at lambda = 3 requires a quadrature bias pinned to
    // +0.0067 +- 0.0002, which no honest discretization choice provides).
    let cfg = kou_benchmark(0.2, 90.0, 1.0);
    let sweep = Sweep::Truncation(vec![5.0, 8.0, 10.0, 12.0, 15.0]);
    let study = convergence_command(&cfg, &sweep, false).expect("truncation study failed");
    let call_at = |label: &str| {
        study
            .points
            .iter()
            .find(|p| p.label == label)
            .and_then(|p| p.call_price)
            .expect("missing sweep point")
    };
    let n10 = call_at("10");
    let tail_step = (call_at("15") - call_at("12")).abs();
    let mut failures = Vec::new();
    if (n10 - 15.699).abs() > 0.005 {
        failures.push(format!("call(N=10) = {n10:.4}, reference 15.699 +- 0.005"));
    }
    if tail_step > 1e-4 {
        failures.push(format!("|call(N=15) - call(N=12)| = {tail_step:.2e} > 1e-4"));
    }
    verdict(
        "criterion 04 (truncation study hits the reference window)",
        failures,
        format!("call(N=10) {n10:.4}, tail step {tail_step:.2e}"),
    );
}

#[test]
fn criterion_05_quadrature_study() {
    let cfg = kou_benchmark(0.2, 90.0, 1.0);
    let sweep = Sweep::QuadratureIntervals(vec![200, 300, 400, 500, 600, 700, 800]);
    let study = convergence_command(&cfg, &sweep, false).expect("quadrature study failed");
    let residuals: Vec<f64> = study
        .points
        .iter()
        .map(|p| p.parity_residual.expect("missing residual"))
        .collect();
    let mut failures = Vec::new();
    for w in residuals.windows(2) {
        if w[1] >= w[0] {
            failures.push(format!("residual not decreasing: {:+.5} -> {:+.5}", w[0], w[1]));
        }
    }
    let last = residuals.last().unwrap();
    if last.abs() > 0.006 {
        failures.push(format!("residual at L=800 is {last:+.5}, cap 0.006"));
    }
    verdict(
        "criterion 05 (quadrature residual decreasing, <= 0.006 at L=800)",
        failures,
        format!(
            "residuals {}",
            residuals
                .iter()
                .map(|r| format!("{r:+.5}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );
}

#[test]
fn criterion_06_grid_refinement_study() {
    let mut cfg = kou_benchmark(0.2, 90.0, 1.0);
    cfg.quadrature.intervals = 1000;
    let sweep = Sweep::GridRefinement(vec![(10, 40), (25, 100), (50, 200), (100, 400)]);
    let study = convergence_command(&cfg, &sweep, false).expect("grid study failed");
    let changes: Vec<f64> = study.points[1..]
        .iter()
        .map(|p| p.change.expect("missing change"))
        .collect();
    let finest = study.points.last().unwrap().call_price.unwrap();
    let mut failures = Vec::new();
    for w in changes.windows(2) {
        let ratio = w[0] / w[1];
        if ratio < 2.5 {
            failures.push(format!(
                "changes shrink only {ratio:.2}x ({:.4} -> {:.4})",
                w[0], w[1]
            ));
        }
    }
    if (finest - 15.6864).abs() > 0.005 {
        failures.push(format!("finest price {finest:.4}, reference 15.6864 +- 0.005"));
    }
    verdict(
        "criterion 06 (grid changes shrink >= 2.5x, finest near 15.6864)",
        failures,
        format!(
            "changes {}, finest {finest:.4}",
            changes
                .iter()
                .map(|c| format!("{c:.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );
}

#[test]
fn criterion_07_contraction() {
    let mut failures = Vec::new();

    // measured per-pass ratios on the sigma=0.2, K2=90, lambda=1 row stay
    // under the theoretical bound (with the stated slack)
    let row7 = &kou_pairs()[6];
    for (i, r) in row7.delta_ratios.iter().enumerate() {
        if *r > row7.contraction_bound + 0.05 {
            failures.push(format!(
                "pass {} ratio {r:.4} exceeds bound {:.4} + 0.05",
                i + 1,
                row7.contraction_bound
            ));
        }
    }

    // frozen from 40-digit evaluation of 1 - ((1-a)/(1+a))^M, a = l*xi*dt/2
    let oracle = 0.6356440396597860;
    let cf = contraction_factor(1.0, 1.0096154, 100, 1.0).unwrap();
    if (cf - oracle).abs() > 1e-5 {
        failures.push(format!("contraction factor {cf:.8} vs oracle {oracle:.8}"));
    }

    // fine-grid limit: 1 - theta^M -> 1 - e^{-lambda xi T}
    let fine = contraction_factor(1.0, 1.0096154, 10_000, 1.0).unwrap();
    let limit = 1.0 - (-1.0096154f64).exp();
    if (fine - limit).abs() > 1e-4 {
        failures.push(format!("limit gap {:.2e} > 1e-4", (fine - limit).abs()));
    }

    verdict(
        "criterion 07 (contraction: measured ratios, factor oracle, limit)",
        failures,
        format!(
            "max ratio {:.4} vs bound {:.4}, factor {cf:.6}, limit gap {:.1e}",
            row7.delta_ratios.iter().cloned().fold(0.0, f64::max),
            row7.contraction_bound,
            (fine - limit).abs()
        ),
    );
}

#[test]
fn criterion_08_no_jump_collapse() {
    let mut cfg = kou_benchmark(0.2, 90.0, 1.0);
    cfg.contract.jump_intensity = 0.0;
    cfg.model = None;
    cfg.config_id = "gbm".into();
    let outcome = parity_command(&cfg).expect("no-jump run failed");
    let deltas = &outcome.call.iteration_report.deltas;
    let mut failures = Vec::new();
    if deltas.len() != 2 || deltas[1] > 10.0 * cfg.sor.tolerance {
        failures.push(format!(
            "expected one effective pass, deltas {:?}",
            deltas
        ));
    }
    if outcome.residual.abs() > 1e-3 {
        failures.push(format!("parity residual {:+.6} > 1e-3", outcome.residual));
    }
    verdict(
        "criterion 08 (lambda=0 collapses to one pass, parity <= 1e-3)",
        failures,
        format!(
            "second delta {:.1e}, residual {:+.1e}",
            deltas.get(1).copied().unwrap_or(f64::NAN),
            outcome.residual
        ),
    );
}

#[test]
fn criterion_09_monte_carlo_cross_validation() {
    let mut failures = Vec::new();

    let desk = McConfig {
        paths: 100_000,
        time_steps: 500,
        seed: 42,
        antithetic: false,
    };

    let row7 = kou_benchmark(0.2, 90.0, 1.0);
    let pde_row7 = kou_pairs()[6].call;
    let mc_row7 = simulate_price(&row7.contract, &row7.model.unwrap(), &desk).unwrap();
    let gap = (pde_row7 - mc_row7.price).abs();
    let cap = 4.0 * (mc_row7.std_error + 0.01);
    if gap > cap {
        failures.push(format!(
            "kou row: |{pde_row7:.4} - {:.4}| = {gap:.4} > {cap:.4}",
            mc_row7.price
        ));
    }

    let merton2 = merton_benchmark(0.1, 100.0);
    let pde_m2 = merton_pairs()[1].call;
    let mc_m2 = simulate_price(&merton2.contract, &merton2.model.unwrap(), &desk).unwrap();
    let gap2 = (pde_m2 - mc_m2.price).abs();
    let cap2 = 4.0 * (mc_m2.std_error + 0.01);
    if gap2 > cap2 {
        failures.push(format!(
            "merton row: |{pde_m2:.4} - {:.4}| = {gap2:.4} > {cap2:.4}",
            mc_m2.price
        ));
    }

    // deterministic degenerate case against the closed form
    // e^{-rT}(S0 (e^{rT} - 1)/(rT) - K2), frozen from 40-digit arithmetic
    let degenerate = OptionContract::call(0.0, 90.0, 1.0, 0.15, 0.0, 0.0, 100.0).unwrap();
    let mc_deg = simulate_price(
        &degenerate,
        &JumpModel::double_exponential(0.6, 25.0, 25.0).unwrap(),
        &desk,
    )
    .unwrap();
    let closed_form = 15.397631171706259;
    if (mc_deg.price - closed_form).abs() > 1e-6 {
        failures.push(format!(
            "degenerate MC {:.8} vs closed form {closed_form:.8}",
            mc_deg.price
        ));
    }

    verdict(
        "criterion 09 (Monte Carlo cross-validation at desk scale)",
        failures,
        format!(
            "kou gap {gap:.4} (cap {cap:.4}), merton gap {gap2:.4} (cap {cap2:.4}), degenerate off by {:.1e}",
            (mc_deg.price - closed_form).abs()
        ),
    );
}

#[test]
fn criterion_10_property_battery() {
    let mut failures = Vec::new();
    let kou = JumpModel::double_exponential(0.6, 25.0, 25.0).unwrap();
    let contract = OptionContract::call(0.0, 90.0, 1.0, 0.15, 0.2, 1.0, 100.0).unwrap();
    let z0 = contract.initial_state().initial_state;

    // payoff is Lipschitz-1
    let put = contract.flipped();
    let mut scan = -2.0;
    while scan < 2.0 {
        let step = 0.013;
        for c in [&contract, &put] {
            if (c.payoff(scan + step) - c.payoff(scan)).abs() > step + 1e-12 {
                failures.push(format!("payoff slope above 1 near z={scan:.3}"));
            }
        }
        scan += step;
    }

    // jump operator: linearity to machine precision, monotonicity, P1 <= xi
    // (the latter at the production quadrature density; coarser grids carry
    // a trapezoid overshoot of their own discretization size)
    let grid = SpaceTimeGrid::centered(z0, 0.5, 80, 10, 1.0).unwrap();
    let quad = kou.quadrature_grid(10.0, 500).unwrap();
    let mut state = 0x243f6a8885a308d3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let f: Vec<f64> = (0..=80).map(|_| next()).collect();
    let g: Vec<f64> = (0..=80).map(|_| next()).collect();
    let combo: Vec<f64> = f.iter().zip(&g).map(|(a, b)| 0.7 * a + 1.3 * b).collect();
    let pf = apply_jump_operator(&f, 5, &quad, &grid, &contract);
    let pg = apply_jump_operator(&g, 5, &quad, &grid, &contract);
    let pcombo = apply_jump_operator(&combo, 5, &quad, &grid, &contract);
    for k in 0..=80 {
        if (pcombo[k] - (0.7 * pf[k] + 1.3 * pg[k])).abs() > 1e-12 {
            failures.push(format!("jump operator not linear at node {k}"));
            break;
        }
    }
    // monotone wherever the stencil interpolates (weights non-negative);
    // the boundary extension instead guarantees exactness on linear rows
    let f_plus: Vec<f64> = f.iter().map(|x| x + 0.25 * next()).collect();
    let pf_plus = apply_jump_operator(&f_plus, 5, &quad, &grid, &contract);
    let q5 = contract.hedge_ratio(grid.t(5)).unwrap();
    let s_lo = (-quad.nodes[quad.nodes.len() - 1]).exp();
    let s_hi = (-quad.nodes[0]).exp();
    for k in 0..=80 {
        let z = grid.z(k);
        let interior = [s_lo, s_hi]
            .iter()
            .all(|s| {
                let arg = q5 + (z - q5) * s;
                arg > grid.z_min && arg < grid.z_max
            });
        if interior && pf[k] > pf_plus[k] + 1e-12 {
            failures.push(format!("jump operator not monotone at interior node {k}"));
        }
    }
    let ones = vec![1.0; 81];
    let p1 = apply_jump_operator(&ones, 5, &quad, &grid, &contract);
    let xi = kou.mean_jump_size();
    if p1.iter().any(|v| *v > xi + 1e-4) {
        failures.push(format!("P1 exceeds xi + 1e-4 (max {:.8})", p1.iter().cloned().fold(0.0, f64::max)));
    }

    // positivity validation: clean on a gentle grid, flags the desk grid
    let constants = kou.compensator(1.0).unwrap();
    let gentle = SpaceTimeGrid::new(1.5, 2.5, 10, 20, 1.0).unwrap();
    let no_jumps = kou.compensator(0.0).unwrap();
    if !check_positivity(&gentle, &contract, &no_jumps).holds {
        failures.push("positivity check rejects a compliant grid".into());
    }
    let desk = SpaceTimeGrid::centered(z0, 0.5, 400, 100, 1.0).unwrap();
    if check_positivity(&desk, &contract, &constants).holds {
        failures.push("positivity check misses desk-scale violations".into());
    }

    // converged surface: slope cap and exact terminal row; the cap needs the
    // jump integral resolved (at L = 500 its discretization noise, ~1e-5,
    // sits on top of the unit slope)
    let quad_fine = kou.quadrature_grid(10.0, 1000).unwrap();
    let (surface, _) = solve(
        &contract,
        &constants,
        &quad_fine,
        &desk,
        &IterationConfig::default(),
        &SorConfig::default(),
    )
    .unwrap();
    if surface.max_slope() > 1.0 + 1e-6 {
        failures.push(format!("surface slope {:.8} above 1 + 1e-6", surface.max_slope()));
    }
    for k in 0..=400 {
        if surface.at(k, 100) != contract.payoff(desk.z(k)) {
            failures.push("terminal row deviates from the payoff".into());
            break;
        }
    }

    // martingale check and bit-reproducibility of the simulator
    let mc = McConfig {
        paths: 40_000,
        time_steps: 200,
        seed: 7,
        antithetic: false,
    };
    let diag = simulate_diagnostics(&contract, &kou, &mc).unwrap();
    let drift = (diag.discounted_terminal_mean - contract.spot).abs();
    if drift > 4.0 * diag.discounted_terminal_se {
        failures.push(format!(
            "martingale drift {drift:.4} > 4 se ({:.4})",
            diag.discounted_terminal_se
        ));
    }
    let small = McConfig {
        paths: 2_000,
        time_steps: 50,
        seed: 11,
        antithetic: false,
    };
    let a = simulate_price(&contract, &kou, &small).unwrap();
    let b = simulate_price(&contract, &kou, &small).unwrap();
    if a.price.to_bits() != b.price.to_bits() {
        failures.push("simulation not bit-reproducible under a fixed seed".into());
    }

    verdict(
        "criterion 10 (property battery, no table data)",
        failures,
        "payoff Lipschitz, operator linear/monotone/bounded, positivity validation, \
         slope cap, terminal row, martingale, reproducibility"
            .into(),
    );
}
