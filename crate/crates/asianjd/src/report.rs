//! Run reports and the fixed CSV schema.
//!
//! Columns: `config_id, zeta, sigma, K2, lambda, price, parity_gap,
//! c_minus_p, mc_price, mc_stderr, iterations, seconds`. Prices carry four
//! decimals, everything else six significant digits; absent fields are
//! empty. Emitted rows parse back to exactly the printed values.

use crate::error::{Error, Result};
use crate::iteration::IterationReport;
use crate::montecarlo::McResult;
use crate::pde_engine::PositivityReport;

/// Outcome of one engine run, with enough context to replay it.
#[derive(Debug, Clone)]
pub struct PriceReport {
    pub config_id: String,
    pub payoff_sign: i8,
    pub sigma: f64,
    pub fixed_strike: f64,
    pub lambda: f64,
    pub price: f64,
    pub parity_gap: f64,
    /// Filled when the twin contract was priced alongside (parity runs).
    pub c_minus_p: Option<f64>,
    pub mc: Option<McResult>,
    pub iterations: usize,
    pub seconds: f64,
    /// Full-precision config echo; parsing it replays the run bit for bit.
    pub config_echo: String,
    pub positivity: PositivityReport,
    pub iteration_report: IterationReport,
}

impl PriceReport {
    pub fn record(&self) -> CsvRecord {
        CsvRecord {
            config_id: self.config_id.clone(),
            zeta: self.payoff_sign,
            sigma: self.sigma,
            fixed_strike: self.fixed_strike,
            lambda: self.lambda,
            price: self.price,
            parity_gap: self.parity_gap,
            c_minus_p: self.c_minus_p,
            mc_price: self.mc.map(|m| m.price),
            mc_stderr: self.mc.map(|m| m.std_error),
            iterations: self.iterations,
            seconds: self.seconds,
        }
    }
}

/// One row of the report CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub config_id: String,
    pub zeta: i8,
    pub sigma: f64,
    pub fixed_strike: f64,
    pub lambda: f64,
    pub price: f64,
    pub parity_gap: f64,
    pub c_minus_p: Option<f64>,
    pub mc_price: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub iterations: usize,
    pub seconds: f64,
}

pub const CSV_HEADER: &str =
    "config_id,zeta,sigma,K2,lambda,price,parity_gap,c_minus_p,mc_price,mc_stderr,iterations,seconds";

/// Four-decimal fixed format for currency amounts.
pub fn fmt_price(x: f64) -> String {
    format!("{x:.4}")
}

/// Six significant digits, plain notation for moderate magnitudes.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude >= 6 || magnitude < -4 {
        format!("{x:.5e}")
    } else {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn fmt_opt(x: Option<f64>, f: impl Fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

impl CsvRecord {
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.config_id,
            self.zeta,
            fmt_sig6(self.sigma),
            fmt_sig6(self.fixed_strike),
            fmt_sig6(self.lambda),
            fmt_price(self.price),
            fmt_price(self.parity_gap),
            fmt_opt(self.c_minus_p, fmt_price),
            fmt_opt(self.mc_price, fmt_price),
            fmt_opt(self.mc_stderr, fmt_sig6),
            self.iterations,
            fmt_sig6(self.seconds),
        )
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 12 {
            return Err(Error::Config {
                location: "csv".into(),
                reason: format!("expected 12 columns, got {}", parts.len()),
            });
        }
        let num = |s: &str, name: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Config {
                location: format!("csv.{name}"),
                reason: format!("bad number `{s}`"),
            })
        };
        let opt = |s: &str, name: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, name).map(Some)
            }
        };
        Ok(CsvRecord {
            config_id: parts[0].to_string(),
            zeta: parts[1].parse().map_err(|_| Error::Config {
                location: "csv.zeta".into(),
                reason: format!("bad sign `{}`", parts[1]),
            })?,
            sigma: num(parts[2], "sigma")?,
            fixed_strike: num(parts[3], "K2")?,
            lambda: num(parts[4], "lambda")?,
            price: num(parts[5], "price")?,
            parity_gap: num(parts[6], "parity_gap")?,
            c_minus_p: opt(parts[7], "c_minus_p")?,
            mc_price: opt(parts[8], "mc_price")?,
            mc_stderr: opt(parts[9], "mc_stderr")?,
            iterations: parts[10].parse().map_err(|_| Error::Config {
                location: "csv.iterations".into(),
                reason: format!("bad count `{}`", parts[10]),
            })?,
            seconds: num(parts[11], "seconds")?,
        })
    }
}

/// Renders a whole report file.
pub fn to_csv(records: &[CsvRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}
