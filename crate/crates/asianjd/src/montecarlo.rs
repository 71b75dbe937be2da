//! Path Monte Carlo benchmark.
//!
//! Simulates the jump diffusion under the pricing measure and estimates the
//! discounted Asian payoff expectation. The per-interval diffusion factor is
//! exact (lognormal), jumps are drawn from a Poisson count per interval and
//! applied at the interval end, and the running average uses the trapezoidal
//! rule on the sampled path. Every path owns a counter-seeded stream, so the
//! result does not depend on the parallel schedule.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::contract::OptionContract;
use crate::error::{Error, Result};
use crate::jump_models::JumpModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    /// Total number of payoff samples (pairs count as two).
    pub paths: usize,
    pub time_steps: usize,
    pub seed: u64,
    /// Pair each path with its Gaussian mirror (jumps shared within a pair).
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            paths: 100_000,
            time_steps: 500,
            seed: 42,
            antithetic: false,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::invalid("mc.paths", "must be at least 1"));
        }
        if self.antithetic && self.paths < 2 {
            return Err(Error::invalid(
                "mc.paths",
                "antithetic sampling needs at least 2 paths",
            ));
        }
        if self.time_steps == 0 {
            return Err(Error::invalid("mc.time_steps", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub price: f64,
    pub std_error: f64,
    pub paths_used: usize,
    pub seconds: f64,
}

/// Distributional diagnostics used by the validation suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McDiagnostics {
    /// Sample mean and standard error of the discounted terminal price
    /// `e^{-rT} S_T` (a martingale: the mean should sit on the spot).
    pub discounted_terminal_mean: f64,
    pub discounted_terminal_se: f64,
    /// Sample mean and standard error of the jump count per path
    /// (Poisson with mean `lambda T`).
    pub mean_jumps_per_path: f64,
    pub jumps_per_path_se: f64,
}

/// Reproducible, statistically independent stream for one path: the seed
/// picks the key, the path index picks the stream.
pub fn seeded_stream(seed: u64, path_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

fn sample_log_jump<R: Rng>(model: &JumpModel, rng: &mut R) -> f64 {
    match *model {
        JumpModel::DoubleExponential {
            up_prob,
            up_rate,
            down_rate,
        } => {
            if rng.gen::<f64>() < up_prob {
                Exp::new(up_rate).unwrap().sample(rng)
            } else {
                -Exp::new(down_rate).unwrap().sample(rng)
            }
        }
        JumpModel::LogNormal { location, scale } => {
            let z: f64 = rng.sample(StandardNormal);
            location + scale * z
        }
    }
}

struct PathSample {
    payoff: f64,
    discounted_terminal: f64,
    jumps: f64,
}

/// One payoff sample. With `antithetic` the path and its Gaussian mirror are
/// advanced together (sharing jump draws) and their payoffs averaged.
fn sample_path<R: Rng>(
    contract: &OptionContract,
    model: &JumpModel,
    drift_compensator: f64,
    time_steps: usize,
    antithetic: bool,
    rng: &mut R,
) -> PathSample {
    let dt = contract.maturity / time_steps as f64;
    let drift = (contract.rate - drift_compensator - 0.5 * contract.volatility * contract.volatility)
        * dt;
    let vol = contract.volatility * dt.sqrt();
    let lambda = contract.jump_intensity;
    let poisson = (lambda > 0.0).then(|| Poisson::new(lambda * dt).unwrap());

    let mut s_a = contract.spot;
    let mut s_b = contract.spot;
    let mut sum_a = 0.5 * s_a;
    let mut sum_b = 0.5 * s_b;
    let mut jumps = 0.0;

    for step in 1..=time_steps {
        let z: f64 = rng.sample(StandardNormal);
        let mut jump_factor = 1.0;
        if let Some(p) = &poisson {
            let count = p.sample(rng) as usize;
            jumps += count as f64;
            for _ in 0..count {
                jump_factor *= sample_log_jump(model, rng).exp();
            }
        }
        let weight = if step == time_steps { 0.5 } else { 1.0 };
        s_a *= (drift + vol * z).exp() * jump_factor;
        sum_a += weight * s_a;
        if antithetic {
            s_b *= (drift - vol * z).exp() * jump_factor;
            sum_b += weight * s_b;
        }
    }

    let discount = (-contract.rate * contract.maturity).exp();
    let payoff_of = |average: f64, terminal: f64| {
        discount
            * (contract.payoff_sign as f64
                * (average - contract.floating_strike * terminal - contract.fixed_strike))
                .max(0.0)
    };
    let avg_a = sum_a / time_steps as f64;
    let payoff = if antithetic {
        let avg_b = sum_b / time_steps as f64;
        0.5 * (payoff_of(avg_a, s_a) + payoff_of(avg_b, s_b))
    } else {
        payoff_of(avg_a, s_a)
    };
    PathSample {
        payoff,
        discounted_terminal: discount * s_a,
        jumps,
    }
}

/// Order-independent sum: fixed pairwise reduction tree over the samples.
fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = pairwise_sum(samples) / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
    let variance = pairwise_sum(&sq) / (n - 1.0);
    (mean, (variance / n).sqrt())
}

fn run_samples(
    contract: &OptionContract,
    model: &JumpModel,
    mc: &McConfig,
) -> Result<Vec<PathSample>> {
    mc.validate()?;
    let constants = model.compensator(contract.jump_intensity)?;
    let samples = if mc.antithetic { mc.paths / 2 } else { mc.paths };
    Ok((0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_stream(mc.seed, i as u64);
            sample_path(
                contract,
                model,
                constants.drift_compensator,
                mc.time_steps,
                mc.antithetic,
                &mut rng,
            )
        })
        .collect())
}

/// Prices the contract by simulation.
pub fn simulate_price(
    contract: &OptionContract,
    model: &JumpModel,
    mc: &McConfig,
) -> Result<McResult> {
    let started = Instant::now();
    let samples = run_samples(contract, model, mc)?;
    let payoffs: Vec<f64> = samples.iter().map(|s| s.payoff).collect();
    let (price, std_error) = mean_and_se(&payoffs);
    let paths_used = if mc.antithetic {
        2 * samples.len()
    } else {
        samples.len()
    };
    Ok(McResult {
        price,
        std_error,
        paths_used,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Martingale and jump-count statistics on fresh paths (same stream layout
/// as [`simulate_price`]).
pub fn simulate_diagnostics(
    contract: &OptionContract,
    model: &JumpModel,
    mc: &McConfig,
) -> Result<McDiagnostics> {
    let samples = run_samples(contract, model, mc)?;
    let terminals: Vec<f64> = samples.iter().map(|s| s.discounted_terminal).collect();
    let jumps: Vec<f64> = samples.iter().map(|s| s.jumps).collect();
    let (tm, tse) = mean_and_se(&terminals);
    let (jm, jse) = mean_and_se(&jumps);
    Ok(McDiagnostics {
        discounted_terminal_mean: tm,
        discounted_terminal_se: tse,
        mean_jumps_per_path: jm,
        jumps_per_path_se: jse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kou() -> JumpModel {
        JumpModel::double_exponential(0.6, 25.0, 25.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(McConfig { paths: 0, ..Default::default() }.validate().is_err());
        assert!(McConfig { time_steps: 0, ..Default::default() }.validate().is_err());
        assert!(McConfig { paths: 1, antithetic: true, ..Default::default() }
            .validate()
            .is_err());
    }

    #[test]
    fn degenerate_path_reproduces_the_deterministic_price() {
        // no diffusion, no jumps: S_t = S0 e^{rt} and the discounted payoff
        // is e^{-rT}(S0 (e^{rT}-1)/(rT) - K2), up to trapezoidal averaging
        let contract = OptionContract::call(0.0, 90.0, 1.0, 0.15, 0.0, 0.0, 100.0).unwrap();
        let mc = McConfig {
            paths: 64,
            time_steps: 500,
            ..Default::default()
        };
        let res = simulate_price(&contract, &kou(), &mc).unwrap();
        assert!(
            (res.price - 15.397631171706259).abs() < 1e-6,
            "deterministic price {}",
            res.price
        );
        assert!(res.std_error < 1e-12);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut r = seeded_stream(7, 3);
            (0..100).map(|_| r.gen::<f64>()).collect()
        };
        let b: Vec<f64> = {
            let mut r = seeded_stream(7, 3);
            (0..100).map(|_| r.gen::<f64>()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<f64> = {
            let mut r = seeded_stream(7, 4);
            (0..100).map(|_| r.gen::<f64>()).collect()
        };
        assert_ne!(a, c);
        let d: Vec<f64> = {
            let mut r = seeded_stream(8, 3);
            (0..100).map(|_| r.gen::<f64>()).collect()
        };
        assert_ne!(a, d);
    }

    #[test]
    fn identical_configs_give_identical_bits() {
        let contract = OptionContract::call(0.0, 90.0, 1.0, 0.15, 0.2, 1.0, 100.0).unwrap();
        let mc = McConfig {
            paths: 2_000,
            time_steps: 50,
            seed: 99,
            antithetic: false,
        };
        let a = simulate_price(&contract, &kou(), &mc).unwrap();
        let b = simulate_price(&contract, &kou(), &mc).unwrap();
        assert_eq!(a.price.to_bits(), b.price.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn jump_sampler_matches_the_mean_jump_size() {
        let mut rng = seeded_stream(1, 0);
        let n = 400_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let y = sample_log_jump(&kou(), &mut rng).exp();
            sum += y;
            sumsq += y * y;
        }
        let mean = sum / n as f64;
        let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
        let xi = kou().mean_jump_size();
        assert!(
            (mean - xi).abs() < 4.0 * se,
            "sampled mean {mean} vs xi {xi} (se {se})"
        );
    }
}
