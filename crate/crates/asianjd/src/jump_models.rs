//! Jump-size distributions and the quadrature grid for the jump integral.
//!
//! The stock jumps multiplicatively by `Y = exp(X)`. Two laws for `X` are
//! supported: the double-exponential (Kou) law and the normal (Merton) law.
//! Everything downstream needs three things from the model: the density of
//! `X`, the mean jump size `xi = E[Y]`, and a truncated log-jump grid on
//! which the jump integral is evaluated by the trapezoidal rule.

use crate::error::{Error, Result};

/// Distribution of the log jump size `X = log Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpModel {
    /// Double-exponential law: density
    /// `p*up_rate*exp(-up_rate*x)` for `x >= 0`,
    /// `(1-p)*down_rate*exp(down_rate*x)` for `x < 0`.
    ///
    /// `up_rate > 1` is required so that `E[exp(X)]` is finite.
    DoubleExponential {
        up_prob: f64,
        up_rate: f64,
        down_rate: f64,
    },
    /// Normal law with the given location and scale: `X ~ N(location, scale^2)`.
    LogNormal { location: f64, scale: f64 },
}

/// Model-level constants consumed by the PDE engine and the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    /// Mean jump size `xi = E[exp(X)]` (dimensionless, > 0).
    pub mean_jump_size: f64,
    /// Drift compensator `mu = lambda * (xi - 1)` (1/time). Keeps the
    /// discounted stock price a martingale.
    pub drift_compensator: f64,
    /// Jump intensity `lambda` (1/time).
    pub jump_intensity: f64,
}

impl JumpModel {
    /// Double-exponential model. Requires `0 < up_prob < 1`, `up_rate > 1`
    /// (finite mean jump size) and `down_rate > 0`.
    pub fn double_exponential(up_prob: f64, up_rate: f64, down_rate: f64) -> Result<Self> {
        if !(up_prob > 0.0 && up_prob < 1.0) {
            return Err(Error::invalid(
                "up_prob",
                format!("must lie in (0, 1), got {up_prob}"),
            ));
        }
        if !(up_rate > 1.0) {
            return Err(Error::invalid(
                "up_rate",
                format!("must exceed 1 for a finite mean jump size, got {up_rate}"),
            ));
        }
        if !(down_rate > 0.0) {
            return Err(Error::invalid(
                "down_rate",
                format!("must be positive, got {down_rate}"),
            ));
        }
        Ok(JumpModel::DoubleExponential {
            up_prob,
            up_rate,
            down_rate,
        })
    }

    /// Normal model for the log jump size. Requires `scale > 0`.
    pub fn log_normal(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::invalid("location", "must be finite"));
        }
        if !(scale > 0.0) {
            return Err(Error::invalid(
                "scale",
                format!("must be positive, got {scale}"),
            ));
        }
        Ok(JumpModel::LogNormal { location, scale })
    }

    /// Density of `X` at `x`.
    ///
    /// For the double-exponential law the point `x = 0` carries the value of
    /// the up branch (the density is right-continuous there).
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            JumpModel::DoubleExponential {
                up_prob,
                up_rate,
                down_rate,
            } => {
                if x >= 0.0 {
                    up_prob * up_rate * (-up_rate * x).exp()
                } else {
                    (1.0 - up_prob) * down_rate * (down_rate * x).exp()
                }
            }
            JumpModel::LogNormal { location, scale } => {
                let z = (x - location) / scale;
                (-0.5 * z * z).exp() / (scale * (2.0 * std::f64::consts::PI).sqrt())
            }
        }
    }

    /// Left limit of the density; differs from [`Self::density`] only at the
    /// double-exponential cusp `x = 0`.
    fn density_left_limit(&self, x: f64) -> f64 {
        match *self {
            JumpModel::DoubleExponential {
                up_prob, down_rate, ..
            } if x == 0.0 => (1.0 - up_prob) * down_rate,
            _ => self.density(x),
        }
    }

    /// Mean jump size `xi = E[exp(X)]`, in closed form.
    pub fn mean_jump_size(&self) -> f64 {
        match *self {
            JumpModel::DoubleExponential {
                up_prob,
                up_rate,
                down_rate,
            } => up_prob * up_rate / (up_rate - 1.0) + (1.0 - up_prob) * down_rate / (down_rate + 1.0),
            JumpModel::LogNormal { location, scale } => (location + 0.5 * scale * scale).exp(),
        }
    }

    /// Bundles `xi` with the drift compensator `mu = lambda * (xi - 1)`.
    pub fn compensator(&self, jump_intensity: f64) -> Result<ModelConstants> {
        if !(jump_intensity >= 0.0) {
            return Err(Error::invalid(
                "jump_intensity",
                format!("must be non-negative, got {jump_intensity}"),
            ));
        }
        let xi = self.mean_jump_size();
        Ok(ModelConstants {
            mean_jump_size: xi,
            drift_compensator: jump_intensity * (xi - 1.0),
            jump_intensity,
        })
    }

    /// Probability that `X` falls outside the truncated support used by
    /// [`Self::quadrature_grid`]. Useful when choosing the truncation level.
    pub fn tail_mass(&self, truncation: f64) -> f64 {
        let (lo, hi) = self.support_bounds(truncation);
        match *self {
            JumpModel::DoubleExponential {
                up_prob,
                up_rate,
                down_rate,
            } => up_prob * (-up_rate * hi).exp() + (1.0 - up_prob) * (down_rate * lo).exp(),
            JumpModel::LogNormal { location, scale } => {
                let hi_z = (hi - location) / scale;
                let lo_z = (lo - location) / scale;
                normal_upper_tail(hi_z) + normal_upper_tail(-lo_z)
            }
        }
    }

    /// Truncated support `[x_min, x_max]` for a given truncation level `N`.
    ///
    /// Double-exponential: `[-N/down_rate, N/up_rate]` (tail mass `exp(-N)`).
    /// Normal: `[location - N*scale, location + N*scale]`.
    pub fn support_bounds(&self, truncation: f64) -> (f64, f64) {
        match *self {
            JumpModel::DoubleExponential {
                up_rate, down_rate, ..
            } => (-truncation / down_rate, truncation / up_rate),
            JumpModel::LogNormal { location, scale } => (
                location - truncation * scale,
                location + truncation * scale,
            ),
        }
    }

    /// Builds the log-jump quadrature grid with `intervals` subintervals
    /// (`intervals + 1` nodes) on the truncated support.
    ///
    /// The double-exponential density has a cusp at zero, so its node budget
    /// is split evenly between the two halves and nodes are clustered at the
    /// cusp by the power map `x = endpoint * (j/half)^2`. The normal density
    /// is smooth and gets a uniform grid.
    pub fn quadrature_grid(&self, truncation: f64, intervals: usize) -> Result<QuadratureGrid> {
        if !(truncation > 0.0) {
            return Err(Error::invalid(
                "truncation",
                format!("must be positive, got {truncation}"),
            ));
        }
        if intervals < 2 {
            return Err(Error::invalid(
                "intervals",
                format!("need at least 2 quadrature subintervals, got {intervals}"),
            ));
        }
        let (x_min, x_max) = self.support_bounds(truncation);
        let nodes = match *self {
            JumpModel::DoubleExponential { .. } => {
                if intervals % 2 != 0 {
                    return Err(Error::invalid(
                        "intervals",
                        format!(
                            "the double-exponential grid splits its budget at the cusp; \
                             an even count is required, got {intervals}"
                        ),
                    ));
                }
                let half = intervals / 2;
                let mut nodes = Vec::with_capacity(intervals + 1);
                for j in 0..half {
                    let u = (half - j) as f64 / half as f64;
                    nodes.push(x_min * u * u);
                }
                nodes.push(0.0);
                for j in 1..=half {
                    let u = j as f64 / half as f64;
                    nodes.push(x_max * u * u);
                }
                nodes
            }
            JumpModel::LogNormal { .. } => {
                let step = (x_max - x_min) / intervals as f64;
                let mut nodes: Vec<f64> = (0..intervals).map(|j| x_min + j as f64 * step).collect();
                nodes.push(x_max);
                nodes
            }
        };
        Ok(QuadratureGrid::from_nodes(self, nodes))
    }

    /// Rebuilds a grid for a different truncation level while keeping the
    /// discretization of `base` fixed: nodes of `base` inside the new support
    /// are reused verbatim, and the support is extended (or trimmed) with
    /// uniform cells of the outermost spacing of `base`.
    ///
    /// This is the grid used by truncation sweeps, where only the truncation
    /// error should vary between sweep points.
    pub fn quadrature_grid_with_truncation(
        &self,
        base: &QuadratureGrid,
        truncation: f64,
    ) -> Result<QuadratureGrid> {
        if !(truncation > 0.0) {
            return Err(Error::invalid(
                "truncation",
                format!("must be positive, got {truncation}"),
            ));
        }
        let (x_min, x_max) = self.support_bounds(truncation);
        let inner: Vec<f64> = base
            .nodes
            .iter()
            .copied()
            .filter(|&x| x > x_min && x < x_max)
            .collect();
        if inner.len() < 2 {
            return Err(Error::invalid(
                "truncation",
                "new support keeps fewer than two nodes of the base grid",
            ));
        }
        let mut nodes = Vec::with_capacity(inner.len() + 2);
        let left_step = base.nodes[1] - base.nodes[0];
        let first = inner[0];
        if first - x_min > 1e-12 {
            let count = ((first - x_min) / left_step).ceil().max(1.0) as usize;
            let step = (first - x_min) / count as f64;
            for i in 0..count {
                nodes.push(x_min + i as f64 * step);
            }
        }
        nodes.extend_from_slice(&inner);
        let right_step = base.nodes[base.nodes.len() - 1] - base.nodes[base.nodes.len() - 2];
        let last = *inner.last().unwrap();
        if x_max - last > 1e-12 {
            let count = ((x_max - last) / right_step).ceil().max(1.0) as usize;
            let step = (x_max - last) / count as f64;
            for i in 1..count {
                nodes.push(last + i as f64 * step);
            }
            nodes.push(x_max);
        }
        Ok(QuadratureGrid::from_nodes(self, nodes))
    }
}

/// Upper tail of the standard normal distribution, via `erfc`.
fn normal_upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Complementary error function (Abramowitz & Stegun 7.1.26 style rational
/// approximation, |error| < 1.2e-7 — ample for tail-mass diagnostics).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398
                                    + t * (1.48851587
                                        + t * (-0.82215223 + t * 0.17087277)))))))))
            .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Log-jump quadrature grid: ordered nodes, densities and the trapezoidal
/// weights of the tilted integral `∫ f(..) e^x F(dx)`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    /// Strictly increasing log-jump nodes `x_0 < ... < x_L`.
    pub nodes: Vec<f64>,
    /// Density of `X` at each node.
    pub densities: Vec<f64>,
    /// Per-node weight `w_l` such that `∫ h(x) e^x F(dx) ≈ Σ_l w_l h(x_l)`.
    ///
    /// Built cell by cell so the double-exponential cusp at zero uses the
    /// correct one-sided density limit on each adjoining cell.
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    fn from_nodes(model: &JumpModel, nodes: Vec<f64>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let densities: Vec<f64> = nodes.iter().map(|&x| model.density(x)).collect();
        let mut weights = vec![0.0; nodes.len()];
        for l in 0..nodes.len() - 1 {
            let dx = nodes[l + 1] - nodes[l];
            // left endpoint of the cell uses the right limit, right endpoint
            // the left limit; they differ only at the cusp.
            weights[l] += 0.5 * dx * nodes[l].exp() * model.density(nodes[l]);
            weights[l + 1] += 0.5 * dx * nodes[l + 1].exp() * model.density_left_limit(nodes[l + 1]);
        }
        QuadratureGrid {
            nodes,
            densities,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Trapezoidal mass of the density over the truncated support
    /// (`≈ 1 - tail_mass`).
    pub fn mass(&self) -> f64 {
        let mut sum = 0.0;
        for l in 0..self.nodes.len() - 1 {
            sum += 0.5
                * (self.densities[l] + self.densities[l + 1])
                * (self.nodes[l + 1] - self.nodes[l]);
        }
        sum
    }

    /// Quadrature value of `∫ e^x F(dx)` (the discrete counterpart of `xi`):
    /// the sum of the weights.
    pub fn tilted_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}
