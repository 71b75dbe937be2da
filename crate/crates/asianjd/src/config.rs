//! Run configuration: a flat, typed key-value format with dotted section
//! prefixes (`contract.sigma = 0.2`), chosen so configs diff cleanly in
//! convergence studies. The full key list lives in `docs/config-schema.md`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::contract::OptionContract;
use crate::error::{Error, Result};
use crate::grid::SpaceTimeGrid;
use crate::iteration::IterationConfig;
use crate::jump_models::{JumpModel, QuadratureGrid};
use crate::montecarlo::McConfig;
use crate::pde_engine::SorConfig;

/// Spatial domain: either explicit bounds or a half width around the initial
/// state `z0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    HalfWidth(f64),
    Bounds { z_min: f64, z_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub domain: Domain,
    pub space_steps: usize,
    pub time_steps: usize,
    /// Reject grids violating the coefficient positivity condition instead
    /// of recording the violation in the report.
    pub enforce_positivity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Truncation level `N`; defaults to 10 for the double-exponential law
    /// and 6 (standard deviations) for the normal law.
    pub truncation: Option<f64>,
    pub intervals: usize,
}

/// Everything one pricing run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub config_id: String,
    pub contract: OptionContract,
    /// May be omitted when `contract.lambda = 0` (no jumps to integrate).
    pub model: Option<JumpModel>,
    pub grid: GridSpec,
    pub quadrature: QuadratureSpec,
    pub iteration: IterationConfig,
    pub sor: SorConfig,
    pub mc: McConfig,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".to_string());
        Self::parse(&text, &id)
    }

    /// Parses the flat key-value format. Unknown keys and duplicate keys are
    /// field-level errors.
    pub fn parse(text: &str, default_id: &str) -> Result<Self> {
        let mut map: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                location: format!("line {}", idx + 1),
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), (idx + 1, value)).is_some() {
                return Err(Error::Config {
                    location: format!("line {}", idx + 1),
                    reason: format!("duplicate key `{key}`"),
                });
            }
        }
        let mut fields = Fields {
            map,
            seen: Vec::new(),
        };
        let cfg = Self::from_fields(&mut fields, default_id)?;
        fields.reject_unknown()?;
        Ok(cfg)
    }

    fn from_fields(f: &mut Fields, default_id: &str) -> Result<Self> {
        let kind = f.string("contract.kind")?.unwrap_or_else(|| "call".into());
        let payoff_sign = match kind.as_str() {
            "call" => 1,
            "put" => -1,
            other => {
                return Err(Error::Config {
                    location: "contract.kind".into(),
                    reason: format!("expected `call` or `put`, got `{other}`"),
                })
            }
        };
        let floating_strike = f.number("contract.k1")?.unwrap_or(0.0);
        let fixed_strike = f.number("contract.k2")?.unwrap_or(0.0);
        let maturity = f.required("contract.maturity")?;
        let rate = f.required("contract.rate")?;
        let sigma = f.required("contract.sigma")?;
        let lambda = f.number("contract.lambda")?.unwrap_or(0.0);
        let spot = f.required("contract.spot")?;
        let mut contract = OptionContract::call(
            floating_strike,
            fixed_strike,
            maturity,
            rate,
            sigma,
            lambda,
            spot,
        )
        .map_err(|e| Error::Config {
            location: "contract".into(),
            reason: e.to_string(),
        })?;
        contract.payoff_sign = payoff_sign;

        let model = match f.string("model.kind")? {
            None => {
                if lambda > 0.0 {
                    return Err(Error::Config {
                        location: "model.kind".into(),
                        reason: "required when contract.lambda > 0".into(),
                    });
                }
                None
            }
            Some(kind) => Some(match kind.as_str() {
                "double_exponential" | "kou" => JumpModel::double_exponential(
                    f.required("model.up_prob")?,
                    f.required("model.up_rate")?,
                    f.required("model.down_rate")?,
                ),
                "log_normal" | "merton" => {
                    JumpModel::log_normal(f.required("model.location")?, f.required("model.scale")?)
                }
                other => {
                    return Err(Error::Config {
                        location: "model.kind".into(),
                        reason: format!(
                            "expected `double_exponential` or `log_normal`, got `{other}`"
                        ),
                    })
                }
            }
            .map_err(|e| Error::Config {
                location: "model".into(),
                reason: e.to_string(),
            })?),
        };

        let domain = match (f.number("grid.z_min")?, f.number("grid.z_max")?) {
            (Some(z_min), Some(z_max)) => {
                if f.number("grid.half_width")?.is_some() {
                    return Err(Error::Config {
                        location: "grid.half_width".into(),
                        reason: "give either explicit bounds or a half width, not both".into(),
                    });
                }
                Domain::Bounds { z_min, z_max }
            }
            (None, None) => Domain::HalfWidth(f.number("grid.half_width")?.unwrap_or(0.5)),
            _ => {
                return Err(Error::Config {
                    location: "grid.z_min/z_max".into(),
                    reason: "explicit bounds need both z_min and z_max".into(),
                })
            }
        };
        let grid = GridSpec {
            domain,
            space_steps: f.integer("grid.space_steps")?.unwrap_or(400),
            time_steps: f.integer("grid.time_steps")?.unwrap_or(100),
            enforce_positivity: f.boolean("grid.enforce_positivity")?.unwrap_or(false),
        };

        let quadrature = QuadratureSpec {
            truncation: f.number("quadrature.truncation")?,
            intervals: f.integer("quadrature.intervals")?.unwrap_or(500),
        };

        let iteration = IterationConfig {
            max_iterations: f.integer("iteration.max_iterations")?.unwrap_or(20),
            tolerance: f.number("iteration.tolerance")?.unwrap_or(1e-6),
            record_history: f.boolean("iteration.record_history")?.unwrap_or(false),
        };
        iteration.validate().map_err(config_err("iteration"))?;

        let sor = SorConfig {
            relaxation: f.number("sor.relaxation")?.unwrap_or(1.2),
            tolerance: f.number("sor.tolerance")?.unwrap_or(1e-8),
            max_sweeps: f.integer("sor.max_sweeps")?.unwrap_or(10_000),
        };
        sor.validate().map_err(config_err("sor"))?;

        let mc = McConfig {
            paths: f.integer("mc.paths")?.unwrap_or(100_000),
            time_steps: f.integer("mc.time_steps")?.unwrap_or(500),
            seed: f.integer("mc.seed")?.unwrap_or(42) as u64,
            antithetic: f.boolean("mc.antithetic")?.unwrap_or(false),
        };
        mc.validate().map_err(config_err("mc"))?;

        let config_id = f
            .string("output.config_id")?
            .unwrap_or_else(|| default_id.to_string());

        Ok(RunConfig {
            config_id,
            contract,
            model,
            grid,
            quadrature,
            iteration,
            sor,
            mc,
        })
    }

    /// Effective quadrature truncation (model-dependent default).
    pub fn truncation(&self) -> f64 {
        self.quadrature.truncation.unwrap_or(match self.model {
            Some(JumpModel::LogNormal { .. }) => 6.0,
            _ => 10.0,
        })
    }

    /// The jump model, or an inert placeholder for jump-free runs.
    pub fn model_or_placeholder(&self) -> JumpModel {
        self.model
            .unwrap_or_else(|| JumpModel::log_normal(0.0, 1.0).expect("placeholder model"))
    }

    pub fn build_grid(&self) -> Result<SpaceTimeGrid> {
        match self.grid.domain {
            Domain::HalfWidth(w) => SpaceTimeGrid::centered(
                self.contract.initial_state().initial_state,
                w,
                self.grid.space_steps,
                self.grid.time_steps,
                self.contract.maturity,
            ),
            Domain::Bounds { z_min, z_max } => SpaceTimeGrid::new(
                z_min,
                z_max,
                self.grid.space_steps,
                self.grid.time_steps,
                self.contract.maturity,
            ),
        }
    }

    pub fn build_quadrature(&self) -> Result<QuadratureGrid> {
        self.model_or_placeholder()
            .quadrature_grid(self.truncation(), self.quadrature.intervals)
    }

    /// Canonical, full-precision echo of the configuration. Parsing the echo
    /// reproduces this config exactly, so any run can be replayed bit for
    /// bit from its report.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let c = &self.contract;
        let _ = writeln!(s, "output.config_id = {}", self.config_id);
        let _ = writeln!(
            s,
            "contract.kind = {}",
            if c.is_call() { "call" } else { "put" }
        );
        let _ = writeln!(s, "contract.k1 = {}", c.floating_strike);
        let _ = writeln!(s, "contract.k2 = {}", c.fixed_strike);
        let _ = writeln!(s, "contract.maturity = {}", c.maturity);
        let _ = writeln!(s, "contract.rate = {}", c.rate);
        let _ = writeln!(s, "contract.sigma = {}", c.volatility);
        let _ = writeln!(s, "contract.lambda = {}", c.jump_intensity);
        let _ = writeln!(s, "contract.spot = {}", c.spot);
        match self.model {
            Some(JumpModel::DoubleExponential {
                up_prob,
                up_rate,
                down_rate,
            }) => {
                let _ = writeln!(s, "model.kind = double_exponential");
                let _ = writeln!(s, "model.up_prob = {up_prob}");
                let _ = writeln!(s, "model.up_rate = {up_rate}");
                let _ = writeln!(s, "model.down_rate = {down_rate}");
            }
            Some(JumpModel::LogNormal { location, scale }) => {
                let _ = writeln!(s, "model.kind = log_normal");
                let _ = writeln!(s, "model.location = {location}");
                let _ = writeln!(s, "model.scale = {scale}");
            }
            None => {}
        }
        match self.grid.domain {
            Domain::HalfWidth(w) => {
                let _ = writeln!(s, "grid.half_width = {w}");
            }
            Domain::Bounds { z_min, z_max } => {
                let _ = writeln!(s, "grid.z_min = {z_min}");
                let _ = writeln!(s, "grid.z_max = {z_max}");
            }
        }
        let _ = writeln!(s, "grid.space_steps = {}", self.grid.space_steps);
        let _ = writeln!(s, "grid.time_steps = {}", self.grid.time_steps);
        let _ = writeln!(s, "grid.enforce_positivity = {}", self.grid.enforce_positivity);
        if let Some(n) = self.quadrature.truncation {
            let _ = writeln!(s, "quadrature.truncation = {n}");
        }
        let _ = writeln!(s, "quadrature.intervals = {}", self.quadrature.intervals);
        let _ = writeln!(s, "iteration.max_iterations = {}", self.iteration.max_iterations);
        let _ = writeln!(s, "iteration.tolerance = {}", self.iteration.tolerance);
        let _ = writeln!(s, "iteration.record_history = {}", self.iteration.record_history);
        let _ = writeln!(s, "sor.relaxation = {}", self.sor.relaxation);
        let _ = writeln!(s, "sor.tolerance = {}", self.sor.tolerance);
        let _ = writeln!(s, "sor.max_sweeps = {}", self.sor.max_sweeps);
        let _ = writeln!(s, "mc.paths = {}", self.mc.paths);
        let _ = writeln!(s, "mc.time_steps = {}", self.mc.time_steps);
        let _ = writeln!(s, "mc.seed = {}", self.mc.seed);
        let _ = writeln!(s, "mc.antithetic = {}", self.mc.antithetic);
        s
    }
}

fn config_err(section: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::Config {
        location: section.into(),
        reason: e.to_string(),
    }
}

struct Fields {
    map: BTreeMap<String, (usize, String)>,
    seen: Vec<String>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<String> {
        self.seen.push(key.to_string());
        self.map.remove(key).map(|(_, v)| v)
    }

    fn string(&mut self, key: &str) -> Result<Option<String>> {
        Ok(self.take(key))
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| Error::Config {
                    location: key.to_string(),
                    reason: format!("expected a number, got `{v}`"),
                })
            })
            .transpose()
    }

    fn integer(&mut self, key: &str) -> Result<Option<usize>> {
        self.take(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| Error::Config {
                    location: key.to_string(),
                    reason: format!("expected a non-negative integer, got `{v}`"),
                })
            })
            .transpose()
    }

    fn boolean(&mut self, key: &str) -> Result<Option<bool>> {
        self.take(key)
            .map(|v| {
                v.parse::<bool>().map_err(|_| Error::Config {
                    location: key.to_string(),
                    reason: format!("expected true or false, got `{v}`"),
                })
            })
            .transpose()
    }

    fn required(&mut self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| Error::Config {
            location: key.to_string(),
            reason: "missing required key".into(),
        })
    }

    fn reject_unknown(&self) -> Result<()> {
        if let Some((key, (line, _))) = self.map.iter().next() {
            return Err(Error::Config {
                location: format!("line {line}"),
                reason: format!("unknown key `{key}`"),
            });
        }
        Ok(())
    }
}
