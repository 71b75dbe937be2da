//! Convergence studies: truncation, quadrature-refinement and grid-refinement
//! sweeps around a base configuration, with table-style CSV output.

use std::fmt::Write as _;
use std::time::Instant;

use crate::config::RunConfig;
use crate::error::Result;
use crate::grid::SpaceTimeGrid;
use crate::iteration::solve;
use crate::jump_models::QuadratureGrid;
use crate::report::{fmt_price, fmt_sig6};

/// What a study varies.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Truncation levels `N`. The quadrature keeps the base discretization
    /// and only moves the cut-off, so the truncation error is isolated.
    Truncation(Vec<f64>),
    /// Quadrature interval counts `L` at fixed truncation.
    QuadratureIntervals(Vec<usize>),
    /// `(time_steps, space_steps)` pairs for the finite-difference lattice.
    GridRefinement(Vec<(usize, usize)>),
}

/// One sweep point. Failed points carry their error and leave the numeric
/// fields empty so a study can continue past them.
#[derive(Debug, Clone)]
pub struct StudyPoint {
    pub label: String,
    pub call_price: Option<f64>,
    pub call_seconds: Option<f64>,
    pub put_price: Option<f64>,
    pub put_seconds: Option<f64>,
    /// `(C - P) - parity`, for the pair-valued sweeps.
    pub parity_residual: Option<f64>,
    /// Successive price difference, for the grid sweep.
    pub change: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Study {
    pub kind: &'static str,
    pub points: Vec<StudyPoint>,
}

impl Study {
    pub fn failed_points(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }

    /// Table-style CSV; the column set depends on the sweep kind.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let pair_layout = self.kind != "grid";
        if pair_layout {
            let _ = writeln!(
                out,
                "{},call,call_seconds,put,put_seconds,residual,error",
                self.kind
            );
        } else {
            let _ = writeln!(out, "time_steps,space_steps,call,change,seconds,error");
        }
        for p in &self.points {
            let opt_price = |x: Option<f64>| x.map(fmt_price).unwrap_or_default();
            let opt_sig = |x: Option<f64>| x.map(fmt_sig6).unwrap_or_default();
            // keep the error column comma-free
            let error = p.error.clone().unwrap_or_default().replace(',', ";");
            if pair_layout {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    p.label,
                    opt_price(p.call_price),
                    opt_sig(p.call_seconds),
                    opt_price(p.put_price),
                    opt_sig(p.put_seconds),
                    opt_price(p.parity_residual),
                    error,
                );
            } else {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    p.label,
                    opt_price(p.call_price),
                    opt_price(p.change),
                    opt_sig(p.call_seconds),
                    error,
                );
            }
        }
        out
    }
}

fn price_once(
    cfg: &RunConfig,
    call_side: bool,
    grid: &SpaceTimeGrid,
    quad: &QuadratureGrid,
) -> Result<(f64, f64)> {
    let contract = if call_side == cfg.contract.is_call() {
        cfg.contract
    } else {
        cfg.contract.flipped()
    };
    let constants = cfg
        .model_or_placeholder()
        .compensator(contract.jump_intensity)?;
    let started = Instant::now();
    let (surface, _) = solve(
        &contract,
        &constants,
        quad,
        grid,
        &cfg.iteration,
        &cfg.sor,
    )?;
    Ok((
        contract.price_from_surface(&surface)?,
        started.elapsed().as_secs_f64(),
    ))
}

/// Prices call and put at one sweep point and assembles the row.
fn pair_point(
    cfg: &RunConfig,
    label: String,
    grid: &SpaceTimeGrid,
    quad: &QuadratureGrid,
) -> StudyPoint {
    let run = || -> Result<StudyPoint> {
        let (call, call_seconds) = price_once(cfg, true, grid, quad)?;
        let (put, put_seconds) = price_once(cfg, false, grid, quad)?;
        Ok(StudyPoint {
            label: label.clone(),
            call_price: Some(call),
            call_seconds: Some(call_seconds),
            put_price: Some(put),
            put_seconds: Some(put_seconds),
            parity_residual: Some(call - put - cfg.contract.parity_gap()),
            change: None,
            error: None,
        })
    };
    run().unwrap_or_else(|e| StudyPoint {
        label,
        call_price: None,
        call_seconds: None,
        put_price: None,
        put_seconds: None,
        parity_residual: None,
        change: None,
        error: Some(e.to_string()),
    })
}

/// Truncation sweep: the base quadrature grid is extended or trimmed per
/// level, keeping the inner discretization fixed.
pub fn truncation_study(cfg: &RunConfig, levels: &[f64]) -> Result<Study> {
    let grid = cfg.build_grid()?;
    let base = cfg.build_quadrature()?;
    let model = cfg.model_or_placeholder();
    let points = levels
        .iter()
        .map(|&n| {
            let label = format!("{n}");
            match model.quadrature_grid_with_truncation(&base, n) {
                Ok(quad) => pair_point(cfg, label, &grid, &quad),
                Err(e) => StudyPoint {
                    label,
                    call_price: None,
                    call_seconds: None,
                    put_price: None,
                    put_seconds: None,
                    parity_residual: None,
                    change: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(Study {
        kind: "truncation",
        points,
    })
}

/// Quadrature refinement sweep at the config's truncation level.
pub fn quadrature_study(cfg: &RunConfig, interval_counts: &[usize]) -> Result<Study> {
    let grid = cfg.build_grid()?;
    let model = cfg.model_or_placeholder();
    let truncation = cfg.truncation();
    let points = interval_counts
        .iter()
        .map(|&l| {
            let label = format!("{l}");
            match model.quadrature_grid(truncation, l) {
                Ok(quad) => pair_point(cfg, label, &grid, &quad),
                Err(e) => StudyPoint {
                    label,
                    call_price: None,
                    call_seconds: None,
                    put_price: None,
                    put_seconds: None,
                    parity_residual: None,
                    change: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(Study {
        kind: "quadrature",
        points,
    })
}

/// Grid refinement sweep over `(time_steps, space_steps)` pairs, pricing the
/// configured side only and reporting successive changes.
pub fn grid_study(cfg: &RunConfig, shapes: &[(usize, usize)]) -> Result<Study> {
    let quad = cfg.build_quadrature()?;
    let mut points = Vec::with_capacity(shapes.len());
    let mut previous: Option<f64> = None;
    for &(time_steps, space_steps) in shapes {
        let label = format!("{time_steps},{space_steps}");
        let mut refined = cfg.clone();
        refined.grid.time_steps = time_steps;
        refined.grid.space_steps = space_steps;
        let point = match refined.build_grid() {
            Ok(grid) => match price_once(&refined, refined.contract.is_call(), &grid, &quad) {
                Ok((price, seconds)) => StudyPoint {
                    label,
                    call_price: Some(price),
                    call_seconds: Some(seconds),
                    put_price: None,
                    put_seconds: None,
                    parity_residual: None,
                    change: previous.map(|p| (price - p).abs()),
                    error: None,
                },
                Err(e) => StudyPoint {
                    label,
                    call_price: None,
                    call_seconds: None,
                    put_price: None,
                    put_seconds: None,
                    parity_residual: None,
                    change: None,
                    error: Some(e.to_string()),
                },
            },
            Err(e) => StudyPoint {
                label,
                call_price: None,
                call_seconds: None,
                put_price: None,
                put_seconds: None,
                parity_residual: None,
                change: None,
                error: Some(e.to_string()),
            },
        };
        if let Some(p) = point.call_price {
            previous = Some(p);
        }
        points.push(point);
    }
    Ok(Study {
        kind: "grid",
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> RunConfig {
        RunConfig::parse(
            "contract.k2=90\ncontract.maturity=1\ncontract.rate=0.15\n\
             contract.sigma=0.2\ncontract.lambda=1\ncontract.spot=100\n\
             model.kind=kou\nmodel.up_prob=0.6\nmodel.up_rate=25\nmodel.down_rate=25\n\
             grid.space_steps=60\ngrid.time_steps=15\nquadrature.intervals=100\n",
            "small",
        )
        .unwrap()
    }

    #[test]
    fn quadrature_study_produces_pair_rows() {
        let study = quadrature_study(&small_cfg(), &[50, 100]).unwrap();
        assert_eq!(study.points.len(), 2);
        assert_eq!(study.failed_points(), 0);
        for p in &study.points {
            assert!(p.call_price.unwrap() > p.put_price.unwrap());
            assert!(p.parity_residual.unwrap().abs() < 0.1);
        }
        let csv = study.to_csv();
        assert!(csv.starts_with("quadrature,call,"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn grid_study_tracks_changes() {
        let study = grid_study(&small_cfg(), &[(5, 20), (10, 40)]).unwrap();
        assert_eq!(study.points.len(), 2);
        assert!(study.points[0].change.is_none());
        assert!(study.points[1].change.is_some());
        assert!(study.to_csv().starts_with("time_steps,space_steps,"));
    }

    #[test]
    fn failed_points_are_recorded_not_fatal() {
        // odd interval count is invalid for the double-exponential grid
        let study = quadrature_study(&small_cfg(), &[51, 100]).unwrap();
        assert_eq!(study.failed_points(), 1);
        assert!(study.points[0].error.is_some());
        assert!(study.points[1].call_price.is_some());
    }

    #[test]
    fn truncation_study_runs_on_the_extended_base_grid() {
        let study = truncation_study(&small_cfg(), &[5.0, 10.0, 12.0]).unwrap();
        assert_eq!(study.failed_points(), 0);
        let calls: Vec<f64> = study.points.iter().map(|p| p.call_price.unwrap()).collect();
        // wider truncation captures more jump mass: call increases
        assert!(calls[0] < calls[1] && calls[1] <= calls[2] + 1e-9);
    }
}
