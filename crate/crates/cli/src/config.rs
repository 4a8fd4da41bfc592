//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Every key
//! has a default, so an empty file is a valid configuration. `dump` writes
//! every key in a fixed order and parsing that output reproduces it exactly.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thetaflow::evolve::IntegratorConfig;
use thetaflow::initial::{InitialKind, InitialSpec};
use thetaflow::lp::FilterBank;
use thetaflow::model::FluidParams;
use thetaflow::spectral::Grid;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub n: usize,
    pub period_scale: f64,
    pub params: FluidParams,
    pub j0: i32,
    pub integrator: IntegratorConfig,
    pub initial: InitialSpec,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 2,
            n: 128,
            period_scale: 4.0,
            params: FluidParams::default(),
            j0: 1,
            integrator: IntegratorConfig::default(),
            initial: InitialSpec::default(),
            output: PathBuf::from("out"),
        }
    }
}

/// Keys in dump order.
pub const KEYS: &[&str] = &[
    "n",
    "N",
    "L",
    "mu",
    "lambda",
    "gamma",
    "A",
    "density_floor",
    "j0",
    "dt",
    "T",
    "cfl_safety",
    "scheme",
    "snapshot_interval",
    "initial",
    "amplitude",
    "band_lo",
    "band_hi",
    "seed",
    "checkpoint",
    "output",
];

fn number<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("cannot parse '{value}'"))
}

fn positive(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = number(value)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {value}"))
    }
}

impl RunConfig {
    /// Sets one key. Single-key invariants are checked here; cross-key
    /// invariants are checked by [`RunConfig::validate`].
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "n" => {
                let d: usize = number(value)?;
                if d != 2 && d != 3 {
                    return Err(format!("dimension must be 2 or 3, got {d}"));
                }
                self.dim = d;
            }
            "N" => {
                let n: usize = number(value)?;
                if n < 4 || !n.is_power_of_two() {
                    return Err(format!("grid size must be a power of two, at least 4, got {n}"));
                }
                self.n = n;
            }
            "L" => self.period_scale = positive(value)?,
            "mu" => self.params.mu = positive(value)?,
            "lambda" => {
                let v: f64 = number(value)?;
                if !v.is_finite() {
                    return Err(format!("must be finite, got {value}"));
                }
                self.params.lambda = v;
            }
            "gamma" => {
                let g: f64 = number(value)?;
                if !(g > 1.0 && g.is_finite()) {
                    return Err(format!("adiabatic index must exceed 1, got {value}"));
                }
                self.params.gamma = g;
            }
            "A" => self.params.pressure_const = positive(value)?,
            "density_floor" => {
                let v: f64 = number(value)?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(format!("must lie in (0, 1), got {value}"));
                }
                self.params.density_floor = v;
            }
            "j0" => self.j0 = number(value)?,
            "dt" => self.integrator.dt = positive(value)?,
            "T" => {
                let v: f64 = number(value)?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(format!("horizon must be non-negative, got {value}"));
                }
                self.integrator.t_end = v;
            }
            "cfl_safety" => {
                let v: f64 = number(value)?;
                if !(v > 0.0 && v <= 1.0) {
                    return Err(format!("must lie in (0, 1], got {value}"));
                }
                self.integrator.cfl_safety = v;
            }
            "scheme" => self.integrator.scheme = value.parse().map_err(|e: thetaflow::Error| e.to_string())?,
            "snapshot_interval" => {
                let v: usize = number(value)?;
                if v == 0 {
                    return Err("must be at least 1".into());
                }
                self.integrator.snapshot_interval = v;
            }
            "initial" => self.initial.kind = value.parse().map_err(|e: thetaflow::Error| e.to_string())?,
            "amplitude" => {
                let v: f64 = number(value)?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(format!("amplitude must be non-negative, got {value}"));
                }
                self.initial.amplitude = v;
            }
            "band_lo" => self.initial.band.0 = number(value)?,
            "band_hi" => self.initial.band.1 = number(value)?,
            "seed" => self.initial.seed = number(value)?,
            "checkpoint" => {
                self.initial.checkpoint = if value.is_empty() { None } else { Some(PathBuf::from(value)) }
            }
            "output" => {
                if value.is_empty() {
                    return Err("output directory must not be empty".into());
                }
                self.output = PathBuf::from(value);
            }
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "n" => self.dim.to_string(),
            "N" => self.n.to_string(),
            "L" => self.period_scale.to_string(),
            "mu" => self.params.mu.to_string(),
            "lambda" => self.params.lambda.to_string(),
            "gamma" => self.params.gamma.to_string(),
            "A" => self.params.pressure_const.to_string(),
            "density_floor" => self.params.density_floor.to_string(),
            "j0" => self.j0.to_string(),
            "dt" => self.integrator.dt.to_string(),
            "T" => self.integrator.t_end.to_string(),
            "cfl_safety" => self.integrator.cfl_safety.to_string(),
            "scheme" => self.integrator.scheme.to_string(),
            "snapshot_interval" => self.integrator.snapshot_interval.to_string(),
            "initial" => self.initial.kind.to_string(),
            "amplitude" => self.initial.amplitude.to_string(),
            "band_lo" => self.initial.band.0.to_string(),
            "band_hi" => self.initial.band.1.to_string(),
            "seed" => self.initial.seed.to_string(),
            "checkpoint" => self
                .initial
                .checkpoint
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            "output" => self.output.display().to_string(),
            _ => return None,
        })
    }

    /// Parses configuration text; `origin` names the source in diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Config {
                origin: origin.to_string(),
                line,
                msg,
            };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'key = value', got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line) {
                return Err(err(format!("'{key}' already set on line {prev}")));
            }
            cfg.set(key, value).map_err(|m| err(format!("{key}: {m}")))?;
        }
        cfg.validate().map_err(|e| match e {
            CliError::Invalid(msg) => CliError::Invalid(format!("{origin}: {msg}")),
            other => other,
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        RunConfig::parse(&text, &path.display().to_string())
    }

    /// Cross-key invariants: viscosity, horizon, grid and block range, band,
    /// checkpoint source.
    pub fn validate(&self) -> Result<()> {
        let invalid = |e: thetaflow::Error| CliError::Invalid(e.to_string());
        self.params.validate(self.dim).map_err(invalid)?;
        self.integrator.validate().map_err(invalid)?;
        self.bank()?;
        let (lo, hi) = self.initial.band;
        if lo > hi {
            return Err(CliError::Invalid(format!("band_lo = {lo} exceeds band_hi = {hi}")));
        }
        match (self.initial.kind, &self.initial.checkpoint) {
            (InitialKind::Checkpoint, None) => {
                return Err(CliError::Invalid("initial = checkpoint needs a checkpoint path".into()))
            }
            (kind, Some(_)) if kind != InitialKind::Checkpoint => {
                return Err(CliError::Invalid(format!(
                    "checkpoint path given but initial = {kind}"
                )))
            }
            _ => {}
        }
        Ok(())
    }

    pub fn bank(&self) -> Result<FilterBank> {
        let invalid = |e: thetaflow::Error| CliError::Invalid(e.to_string());
        let grid = Grid::new(self.dim, self.n, self.period_scale).map_err(invalid)?;
        FilterBank::new(&grid, self.j0).map_err(invalid)
    }

    /// Every key in canonical form.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{}", format!("{key} = {}", self.get(key).expect("listed key")).trim_end());
        }
        out
    }
}
