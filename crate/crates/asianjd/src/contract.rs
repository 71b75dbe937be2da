//! Option contract and the dimension-reduced state.
//!
//! The continuously averaged Asian payoff
//! `(zeta * ((1/T) ∫ S_t dt - K1 * S_T - K2))^+` is priced through Vecer's
//! reduction: a self-financing portfolio holding `q_t` shares replicates the
//! average, and the ratio `Z = X/S` turns the two-dimensional problem into a
//! one-dimensional one. The price is `S0 * v(z0, 0)` where `v` solves the
//! reduced equation and `z0` is the initial portfolio-to-stock ratio.

use crate::error::{Error, Result};
use crate::surface::ValueSurface;

/// Contract terms plus the market parameters that define the pricing problem.
///
/// `payoff_sign` is `+1` for a call and `-1` for a put, stored as a sign so
/// the payoff reads literally as `(sign * (z - K1))^+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionContract {
    pub payoff_sign: i8,
    /// Weight of the terminal stock price in the strike leg (`K1`).
    pub floating_strike: f64,
    /// Cash strike in currency units (`K2`).
    pub fixed_strike: f64,
    /// Maturity in years.
    pub maturity: f64,
    /// Continuously compounded risk-free rate (per year). Must be positive:
    /// it divides the hedge ratio.
    pub rate: f64,
    /// Diffusive volatility (per sqrt-year).
    pub volatility: f64,
    /// Jump intensity (per year).
    pub jump_intensity: f64,
    /// Spot price in currency units.
    pub spot: f64,
}

/// Initial point of the reduced state process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    /// `z0 = q0 - e^{-rT} K2 / S0`, the dimensionless starting state.
    pub initial_state: f64,
    /// `q0`, the initial number of shares in the replicating portfolio.
    pub initial_hedge: f64,
}

impl OptionContract {
    pub fn call(
        floating_strike: f64,
        fixed_strike: f64,
        maturity: f64,
        rate: f64,
        volatility: f64,
        jump_intensity: f64,
        spot: f64,
    ) -> Result<Self> {
        OptionContract {
            payoff_sign: 1,
            floating_strike,
            fixed_strike,
            maturity,
            rate,
            volatility,
            jump_intensity,
            spot,
        }
        .validated()
    }

    pub fn put(
        floating_strike: f64,
        fixed_strike: f64,
        maturity: f64,
        rate: f64,
        volatility: f64,
        jump_intensity: f64,
        spot: f64,
    ) -> Result<Self> {
        OptionContract {
            payoff_sign: -1,
            ..Self::call(
                floating_strike,
                fixed_strike,
                maturity,
                rate,
                volatility,
                jump_intensity,
                spot,
            )?
        }
        .validated()
    }

    /// The same contract with the opposite payoff sign.
    pub fn flipped(&self) -> Self {
        OptionContract {
            payoff_sign: -self.payoff_sign,
            ..*self
        }
    }

    pub fn is_call(&self) -> bool {
        self.payoff_sign > 0
    }

    fn validated(self) -> Result<Self> {
        if self.payoff_sign != 1 && self.payoff_sign != -1 {
            return Err(Error::invalid("payoff_sign", "must be +1 or -1"));
        }
        if !(self.maturity > 0.0) {
            return Err(Error::invalid(
                "maturity",
                format!("must be positive, got {}", self.maturity),
            ));
        }
        if !(self.rate > 0.0) {
            return Err(Error::invalid(
                "rate",
                format!("must be positive (it divides the hedge ratio), got {}", self.rate),
            ));
        }
        if !(self.volatility >= 0.0) {
            return Err(Error::invalid(
                "volatility",
                format!("must be non-negative, got {}", self.volatility),
            ));
        }
        if !(self.jump_intensity >= 0.0) {
            return Err(Error::invalid(
                "jump_intensity",
                format!("must be non-negative, got {}", self.jump_intensity),
            ));
        }
        if !(self.spot > 0.0) {
            return Err(Error::invalid(
                "spot",
                format!("must be positive, got {}", self.spot),
            ));
        }
        if !(self.floating_strike >= 0.0) {
            return Err(Error::invalid(
                "floating_strike",
                format!("must be non-negative, got {}", self.floating_strike),
            ));
        }
        if !(self.fixed_strike >= 0.0) {
            return Err(Error::invalid(
                "fixed_strike",
                format!("must be non-negative, got {}", self.fixed_strike),
            ));
        }
        Ok(self)
    }

    /// Number of shares `q_t = (1 - e^{-r(T-t)}) / (rT)` held by the
    /// replicating portfolio at time `t`. Decreasing in `t`, zero at maturity
    /// and bounded by `1/(rT)`.
    pub fn hedge_ratio(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.maturity).contains(&t) {
            return Err(Error::invalid(
                "t",
                format!("time {t} outside [0, {}]", self.maturity),
            ));
        }
        Ok(self.hedge_ratio_unchecked(t))
    }

    #[inline]
    pub(crate) fn hedge_ratio_unchecked(&self, t: f64) -> f64 {
        (1.0 - (-self.rate * (self.maturity - t)).exp()) / (self.rate * self.maturity)
    }

    /// Initial reduced state `z0` together with the initial hedge `q0`.
    pub fn initial_state(&self) -> ReducedState {
        let q0 = self.hedge_ratio_unchecked(0.0);
        ReducedState {
            initial_state: q0
                - (-self.rate * self.maturity).exp() * self.fixed_strike / self.spot,
            initial_hedge: q0,
        }
    }

    /// Terminal payoff of the reduced problem: `(sign * (z - K1))^+`.
    /// Lipschitz with constant 1 and convex in `z`.
    #[inline]
    pub fn payoff(&self, z: f64) -> f64 {
        (self.payoff_sign as f64 * (z - self.floating_strike)).max(0.0)
    }

    /// Model-free call-put difference
    /// `C - P = (1/(rT))(1 - e^{-rT}) S0 - K1 S0 - e^{-rT} K2`, in currency.
    pub fn parity_gap(&self) -> f64 {
        let q0 = self.hedge_ratio_unchecked(0.0);
        q0 * self.spot
            - self.floating_strike * self.spot
            - (-self.rate * self.maturity).exp() * self.fixed_strike
    }

    /// Price in currency: `S0` times the converged surface at `(z0, t=0)`,
    /// read off with linear interpolation between lattice nodes.
    pub fn price_from_surface(&self, surface: &ValueSurface) -> Result<f64> {
        let z0 = self.initial_state().initial_state;
        let g = surface.grid();
        match surface.interpolate(z0, 0) {
            Some(v) => Ok(self.spot * v),
            None => Err(Error::OutOfDomain {
                z0,
                z_min: g.z_min,
                z_max: g.z_max,
            }),
        }
    }
}
