//! Fixed-point driver.
//!
//! Starting from the terminal payoff, each pass evaluates the jump integral
//! on the previous iterate (an explicit source) and then sweeps backward
//! through time solving purely parabolic Crank-Nicolson steps. The sequence
//! contracts in the sup norm at rate `1 - theta^M` per pass, where
//! `theta = (1 - lambda xi dt / 2) / (1 + lambda xi dt / 2)`.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::contract::OptionContract;
use crate::error::{Error, Result};
use crate::grid::SpaceTimeGrid;
use crate::jump_integral::apply_jump_operator;
use crate::jump_models::{ModelConstants, QuadratureGrid};
use crate::pde_engine::{step_backward, SorConfig};
use crate::surface::ValueSurface;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    pub max_iterations: usize,
    /// Sup-norm threshold on the change of the whole surface between passes.
    pub tolerance: f64,
    /// Keep every intermediate surface (memory: one full lattice per pass).
    pub record_history: bool,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            max_iterations: 20,
            tolerance: 1e-6,
            record_history: false,
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::invalid("iteration.max_iterations", "must be at least 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid(
                "iteration.tolerance",
                format!("must be positive, got {}", self.tolerance),
            ));
        }
        Ok(())
    }
}

/// Convergence diagnostics of one solve.
#[derive(Debug, Clone)]
pub struct IterationReport {
    pub iterations: usize,
    pub converged: bool,
    /// `deltas[n-1] = sup |v_n - v_{n-1}|` for pass `n = 1, 2, ...`.
    pub deltas: Vec<f64>,
    /// Theoretical per-pass bound `1 - theta^M` on the delta ratios.
    pub contraction_bound: f64,
    pub seconds_per_iteration: Vec<f64>,
    /// Intermediate surfaces, oldest first, when history recording is on.
    pub history: Option<Vec<ValueSurface>>,
}

impl IterationReport {
    /// Measured ratios `deltas[n] / deltas[n-1]`.
    pub fn delta_ratios(&self) -> Vec<f64> {
        self.deltas.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Per-iteration CSV: `n, delta, ratio, seconds`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,delta,ratio,seconds")?;
        for (i, d) in self.deltas.iter().enumerate() {
            let ratio = if i == 0 {
                String::new()
            } else {
                format!("{:.6e}", d / self.deltas[i - 1])
            };
            writeln!(
                out,
                "{},{:.6e},{},{:.6}",
                i + 1,
                d,
                ratio,
                self.seconds_per_iteration[i]
            )?;
        }
        Ok(())
    }
}

/// Per-pass contraction bound `1 - theta^M` of the discrete iteration.
///
/// Requires `lambda xi dt / 2 < 1` so that `theta` lies in `(0, 1]`; zero
/// jump intensity gives a zero bound (the first pass is already exact).
pub fn contraction_factor(
    jump_intensity: f64,
    mean_jump_size: f64,
    time_steps: usize,
    maturity: f64,
) -> Result<f64> {
    let dt = maturity / time_steps as f64;
    let half = 0.5 * jump_intensity * mean_jump_size * dt;
    if !(half < 1.0) {
        return Err(Error::invalid(
            "time_steps",
            format!(
                "lambda*xi*dt/2 = {half} >= 1; refine the time grid so the \
                 contraction ratio stays in (0, 1]"
            ),
        ));
    }
    let theta = (1.0 - half) / (1.0 + half);
    Ok(1.0 - theta.powi(time_steps as i32))
}

/// Rate factor `(1 - e^{-lambda eta (T - t)})^n` with `eta = max(xi, 1)`
/// governing the distance of pass `n` from the fixed point. The overall
/// scale in front of the rate is not observable, so only the factor is
/// reported.
pub fn error_bound(
    passes: usize,
    jump_intensity: f64,
    mean_jump_size: f64,
    maturity: f64,
    t: f64,
) -> f64 {
    let eta = mean_jump_size.max(1.0);
    let base = 1.0 - (-jump_intensity * eta * (maturity - t)).exp();
    base.powi(passes as i32)
}

/// Runs the fixed-point iteration to convergence.
///
/// Each pass applies the jump operator to every time level of the previous
/// iterate (in parallel), then solves the backward Crank-Nicolson sweep with
/// that source held fixed. Both time levels of the source average use the
/// previous iterate only, so each pass is one clean application of the
/// discrete fixed-point map.
pub fn solve(
    contract: &OptionContract,
    constants: &ModelConstants,
    quad: &QuadratureGrid,
    grid: &SpaceTimeGrid,
    iteration: &IterationConfig,
    sor: &SorConfig,
) -> Result<(ValueSurface, IterationReport)> {
    iteration.validate()?;
    sor.validate()?;
    let lambda = constants.jump_intensity;
    let contraction_bound =
        contraction_factor(lambda, constants.mean_jump_size, grid.time_steps, grid.dt * grid.time_steps as f64)?;

    let space = grid.space_steps;
    let payoff_row: Vec<f64> = (0..=space).map(|k| contract.payoff(grid.z(k))).collect();
    let mut previous = ValueSurface::from_row(*grid, &payoff_row);

    let mut deltas = Vec::new();
    let mut seconds = Vec::new();
    let mut history = iteration.record_history.then(Vec::new);

    for pass in 1..=iteration.max_iterations {
        let started = Instant::now();

        // jump source rows of the previous iterate, one per time level
        let source_rows: Option<Vec<Vec<f64>>> = (lambda > 0.0).then(|| {
            (0..=grid.time_steps)
                .into_par_iter()
                .map(|m| apply_jump_operator(previous.row(m), m, quad, grid, contract))
                .collect()
        });

        let mut current = ValueSurface::from_row(*grid, &payoff_row);
        let mut source = vec![0.0; space + 1];
        for m in (0..grid.time_steps).rev() {
            if let Some(rows) = &source_rows {
                let scale = 0.5 * lambda * grid.dt;
                for k in 0..=space {
                    source[k] = scale * (rows[m + 1][k] + rows[m][k]);
                }
            }
            let row = step_backward(
                &current.row(m + 1).to_vec(),
                &source,
                grid,
                contract,
                constants,
                m,
                sor,
            )?;
            current.row_mut(m).copy_from_slice(&row);
        }

        let delta = current.sup_distance(&previous);
        deltas.push(delta);
        seconds.push(started.elapsed().as_secs_f64());
        if let Some(h) = &mut history {
            h.push(current.clone());
        }
        previous = current;

        if delta < iteration.tolerance {
            return Ok((
                previous,
                IterationReport {
                    iterations: pass,
                    converged: true,
                    deltas,
                    contraction_bound,
                    seconds_per_iteration: seconds,
                    history,
                },
            ));
        }
    }

    Err(Error::IterationDiverged {
        iterations: iteration.max_iterations,
        last_delta: *deltas.last().unwrap(),
    })
}
