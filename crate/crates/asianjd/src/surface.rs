//! Discrete value surface produced by the solver.

use crate::grid::SpaceTimeGrid;

/// Values `v(k, m)` of one (dimensionless) iterate on the lattice, stored
/// row-major by time level: index `m * (K + 1) + k`.
#[derive(Debug, Clone)]
pub struct ValueSurface {
    grid: SpaceTimeGrid,
    values: Vec<f64>,
}

impl ValueSurface {
    /// Surface with every time level equal to `row`.
    pub fn from_row(grid: SpaceTimeGrid, row: &[f64]) -> Self {
        assert_eq!(row.len(), grid.space_steps + 1);
        let levels = grid.time_steps + 1;
        let mut values = Vec::with_capacity(levels * row.len());
        for _ in 0..levels {
            values.extend_from_slice(row);
        }
        ValueSurface { grid, values }
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    #[inline]
    pub fn row(&self, m: usize) -> &[f64] {
        let w = self.grid.space_steps + 1;
        &self.values[m * w..(m + 1) * w]
    }

    #[inline]
    pub fn row_mut(&mut self, m: usize) -> &mut [f64] {
        let w = self.grid.space_steps + 1;
        &mut self.values[m * w..(m + 1) * w]
    }

    #[inline]
    pub fn at(&self, k: usize, m: usize) -> f64 {
        self.values[m * (self.grid.space_steps + 1) + k]
    }

    /// Sup-norm distance to another surface on the same lattice.
    pub fn sup_distance(&self, other: &ValueSurface) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Steepest discrete slope `|v(k+1,m) - v(k,m)| / dz` over the lattice.
    pub fn max_slope(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..=self.grid.time_steps {
            let row = self.row(m);
            for w in row.windows(2) {
                worst = worst.max((w[1] - w[0]).abs());
            }
        }
        worst / self.grid.dz
    }

    /// Linear interpolation of the time-`m` row at an interior point `z`.
    /// Returns `None` outside `[z_min, z_max]`.
    pub fn interpolate(&self, z: f64, m: usize) -> Option<f64> {
        let g = &self.grid;
        if z < g.z_min || z > g.z_max {
            return None;
        }
        let pos = (z - g.z_min) / g.dz;
        let k = (pos.floor() as usize).min(g.space_steps - 1);
        let w = pos - k as f64;
        let row = self.row(m);
        Some((1.0 - w) * row[k] + w * row[k + 1])
    }
}
