//! Discrete jump operator.
//!
//! In log-jump coordinates the jump redistribution integral reads
//!
//! ```text
//! (P f)(z, t) = ∫ f(z e^{-x} + q_t (1 - e^{-x}), t) e^x F(dx)
//! ```
//!
//! and is approximated by the trapezoidal rule on the model's quadrature
//! grid, with the integrand evaluated by linear interpolation on the `z`
//! lattice. Arguments falling outside `[z_min, z_max]` are extended linearly
//! with the slope of the outermost cell (zero second difference), matching
//! both the boundary closure of the PDE step and the asymptotically linear
//! payoff.
//!
//! The operator is exactly linear in its argument row. It is pointwise
//! monotone at every node whose stencil stays inside the lattice; the
//! boundary extension carries one negative weight, trading monotonicity
//! there for exactness on linear data.

use crate::contract::OptionContract;
use crate::grid::SpaceTimeGrid;
use crate::jump_models::QuadratureGrid;

/// Linear interpolation of `row` at the fractional node position `pos`
/// (`pos = 0` at `z_min`, `pos = K` at `z_max`), extended linearly beyond
/// the lattice with the slope of the nearest cell.
#[inline]
fn interpolate_at_position(row: &[f64], pos: f64) -> f64 {
    let last = row.len() - 1;
    if pos <= 0.0 {
        row[0] + pos * (row[1] - row[0])
    } else if pos >= last as f64 {
        row[last] + (pos - last as f64) * (row[last] - row[last - 1])
    } else {
        let k = pos as usize;
        let w = pos - k as f64;
        (1.0 - w) * row[k] + w * row[k + 1]
    }
}

/// Value of the lattice row at an arbitrary state `z`, interpolating between
/// nodes and extrapolating linearly outside the domain.
pub fn evaluate_shifted(row: &[f64], z: f64, grid: &SpaceTimeGrid) -> f64 {
    debug_assert_eq!(row.len(), grid.space_steps + 1);
    interpolate_at_position(row, (z - grid.z_min) / grid.dz)
}

/// Applies the discrete jump operator to one time level: for every lattice
/// node `k`, the trapezoidal sum of the interpolated row at the shifted
/// states `z_k e^{-x_l} + q (1 - e^{-x_l})`.
///
/// Pure in its inputs; rows for different time levels can run in parallel.
pub fn apply_jump_operator(
    row: &[f64],
    time_index: usize,
    quad: &QuadratureGrid,
    grid: &SpaceTimeGrid,
    contract: &OptionContract,
) -> Vec<f64> {
    let q = contract.hedge_ratio_unchecked(grid.t(time_index));
    let n = row.len();
    debug_assert_eq!(n, grid.space_steps + 1);
    let mut out = vec![0.0; n];
    for (l, &x) in quad.nodes.iter().enumerate() {
        let weight = quad.weights[l];
        if weight == 0.0 {
            continue;
        }
        let shrink = (-x).exp();
        let offset = q * (1.0 - shrink);
        // position of the shifted state, affine in k:
        // (z_k shrink + offset - z_min) / dz = base + k shrink
        let base = (grid.z_min * shrink + offset - grid.z_min) / grid.dz;
        for (k, slot) in out.iter_mut().enumerate() {
            *slot += weight * interpolate_at_position(row, base + k as f64 * shrink);
        }
    }
    out
}
