//! Space-time lattice for the finite-difference solver.

use crate::error::{Error, Result};

/// Uniform lattice on `[z_min, z_max] x [0, T]` with `space_steps` cells in
/// `z` and `time_steps` cells in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGrid {
    pub z_min: f64,
    pub z_max: f64,
    /// Number of space cells `K`; nodes are `k = 0 ..= K`.
    pub space_steps: usize,
    /// Number of time cells `M`; levels are `m = 0 ..= M` with `m = M` at maturity.
    pub time_steps: usize,
    pub dz: f64,
    pub dt: f64,
}

impl SpaceTimeGrid {
    pub fn new(
        z_min: f64,
        z_max: f64,
        space_steps: usize,
        time_steps: usize,
        maturity: f64,
    ) -> Result<Self> {
        if !(z_min < z_max) {
            return Err(Error::invalid(
                "z_min/z_max",
                format!("need z_min < z_max, got [{z_min}, {z_max}]"),
            ));
        }
        if space_steps < 2 {
            return Err(Error::invalid(
                "space_steps",
                format!("need at least 2 space cells, got {space_steps}"),
            ));
        }
        if time_steps < 1 {
            return Err(Error::invalid(
                "time_steps",
                format!("need at least 1 time cell, got {time_steps}"),
            ));
        }
        if !(maturity > 0.0) {
            return Err(Error::invalid(
                "maturity",
                format!("must be positive, got {maturity}"),
            ));
        }
        Ok(SpaceTimeGrid {
            z_min,
            z_max,
            space_steps,
            time_steps,
            dz: (z_max - z_min) / space_steps as f64,
            dt: maturity / time_steps as f64,
        })
    }

    /// Grid centered on `center` with the given half width.
    pub fn centered(
        center: f64,
        half_width: f64,
        space_steps: usize,
        time_steps: usize,
        maturity: f64,
    ) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::invalid(
                "half_width",
                format!("must be positive, got {half_width}"),
            ));
        }
        SpaceTimeGrid::new(
            center - half_width,
            center + half_width,
            space_steps,
            time_steps,
            maturity,
        )
    }

    #[inline]
    pub fn z(&self, k: usize) -> f64 {
        self.z_min + k as f64 * self.dz
    }

    #[inline]
    pub fn t(&self, m: usize) -> f64 {
        m as f64 * self.dt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_shape() {
        assert!(SpaceTimeGrid::new(0.0, 0.0, 10, 10, 1.0).is_err());
        assert!(SpaceTimeGrid::new(0.0, 1.0, 1, 10, 1.0).is_err());
        assert!(SpaceTimeGrid::new(0.0, 1.0, 10, 0, 1.0).is_err());
        assert!(SpaceTimeGrid::new(0.0, 1.0, 10, 10, 0.0).is_err());
        let g = SpaceTimeGrid::new(-0.5, 0.5, 400, 100, 1.0).unwrap();
        assert_eq!(g.dz, 0.0025);
        assert_eq!(g.dt, 0.01);
        assert_eq!(g.z(0), -0.5);
        assert_eq!(g.z(400), 0.5);
        assert_eq!(g.t(100), 1.0);
    }

    #[test]
    fn centered_grid_puts_center_on_a_node() {
        let g = SpaceTimeGrid::centered(0.154, 0.5, 400, 100, 1.0).unwrap();
        assert!((g.z(200) - 0.154).abs() < 1e-12);
    }
}
