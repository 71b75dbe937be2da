//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A model, contract or solver parameter failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A configuration file could not be parsed.
    #[error("config error ({location}): {reason}")]
    Config { location: String, reason: String },

    /// The SOR sweep did not reach the requested tolerance.
    #[error("SOR failed to converge at time step {time_index}: residual {residual:.3e} after {sweeps} sweeps")]
    SorDiverged {
        time_index: usize,
        residual: f64,
        sweeps: usize,
    },

    /// The fixed-point iteration hit its iteration cap while still moving.
    #[error("fixed-point iteration did not converge: delta {last_delta:.3e} after {iterations} iterations")]
    IterationDiverged { iterations: usize, last_delta: f64 },

    /// The price readout point lies outside the spatial grid.
    #[error("initial state z0={z0:.6} outside grid [{z_min:.6}, {z_max:.6}]; widen the domain")]
    OutOfDomain { z0: f64, z_min: f64, z_max: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
