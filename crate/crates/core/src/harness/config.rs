//! Run configuration: presets, discretisation choices and output paths.
//!
//! Configs can be read from a flat `key = value` file whose keys mirror the
//! CLI flags (`problem`, `degree`, `cells`, `limiter`, `integrator`, `cfl`,
//! `tfinal`, `gamma`, `eps`, `placement`, `out`, `left`, `right`, `domain`,
//! `x0`). Blank lines and `#` comments are ignored.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::euler::{PrimitiveState, DEFAULT_EPSILON, DEFAULT_GAMMA};
use crate::limiter::LimiterKind;
use crate::time::{EvolveConfig, Integrator, LimiterPlacement};

/// Environment variable that relocates relative output paths.
pub const OUTPUT_DIR_ENV: &str = "IRPDG_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    SmoothAdvection,
    Lax,
    ShuOsher,
    Riemann {
        left: PrimitiveState,
        right: PrimitiveState,
        x0: f64,
        domain: (f64, f64),
    },
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::SmoothAdvection => "smooth_advection",
            Problem::Lax => "lax",
            Problem::ShuOsher => "shu_osher",
            Problem::Riemann { .. } => "riemann",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: Problem,
    pub degree: usize,
    pub n_cells: usize,
    pub limiter: LimiterKind,
    pub integrator: Integrator,
    /// `None` uses the integrator default.
    pub cfl_fraction: Option<f64>,
    /// `None` uses the preset's final time.
    pub t_final: Option<f64>,
    pub gamma: f64,
    pub epsilon: f64,
    pub placement: LimiterPlacement,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: Problem::SmoothAdvection,
            degree: 2,
            n_cells: 100,
            limiter: LimiterKind::Irp,
            integrator: Integrator::Rk3,
            cfl_fraction: None,
            t_final: None,
            gamma: DEFAULT_GAMMA,
            epsilon: DEFAULT_EPSILON,
            placement: LimiterPlacement::PerStage,
            output_path: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_f64(key, x)).collect()
}

/// `rho,u,p`
pub fn parse_primitive(key: &str, v: &str) -> Result<PrimitiveState> {
    match parse_list(key, v)?.as_slice() {
        &[rho, u, p] => Ok(PrimitiveState::new(rho, u, p)),
        _ => Err(Error::Config(format!("{key}: expected rho,u,p"))),
    }
}

/// `a,b`
pub fn parse_domain(key: &str, v: &str) -> Result<(f64, f64)> {
    match parse_list(key, v)?.as_slice() {
        &[a, b] if b > a => Ok((a, b)),
        _ => Err(Error::Config(format!("{key}: expected a,b with a < b"))),
    }
}

/// Comma-separated positive integers.
pub fn parse_cells_list(v: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Config(format!("cells-list: '{x}' is not a positive integer")))
        })
        .collect()
}

impl RunConfig {
    pub fn preset(problem: Problem) -> Self {
        Self { problem, ..Self::default() }
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "problem" => {
                self.problem = match value {
                    "smooth_advection" | "smooth" => Problem::SmoothAdvection,
                    "lax" => Problem::Lax,
                    "shu_osher" => Problem::ShuOsher,
                    "riemann" | "custom-riemann" => match self.problem {
                        p @ Problem::Riemann { .. } => p,
                        _ => Problem::Riemann {
                            left: PrimitiveState::new(1.0, 0.0, 1.0),
                            right: PrimitiveState::new(0.125, 0.0, 0.1),
                            x0: 0.0,
                            domain: (-1.0, 1.0),
                        },
                    },
                    other => return Err(Error::Config(format!("unknown problem '{other}'"))),
                }
            }
            "degree" => {
                self.degree = value.parse().map_err(|_| Error::Config(format!("degree: '{value}'")))?
            }
            "cells" => {
                self.n_cells = value.parse().map_err(|_| Error::Config(format!("cells: '{value}'")))?
            }
            "limiter" => self.limiter = value.parse()?,
            "integrator" => self.integrator = value.parse()?,
            "cfl" => self.cfl_fraction = Some(parse_f64("cfl", value)?),
            "tfinal" => self.t_final = Some(parse_f64("tfinal", value)?),
            "gamma" => self.gamma = parse_f64("gamma", value)?,
            "eps" => self.epsilon = parse_f64("eps", value)?,
            "placement" => self.placement = value.parse()?,
            "out" => self.output_path = Some(PathBuf::from(value)),
            key @ ("left" | "right" | "x0" | "domain") => {
                let Problem::Riemann { left, right, x0, domain } = &mut self.problem else {
                    return Err(Error::Config(format!("{key} only applies to problem=riemann")));
                };
                match key {
                    "left" => *left = parse_primitive(key, value)?,
                    "right" => *right = parse_primitive(key, value)?,
                    "x0" => *x0 = parse_f64(key, value)?,
                    _ => *domain = parse_domain(key, value)?,
                }
            }
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parse `key = value` lines on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        // degree 0 is the first-order diagnostic mode
        if self.degree > 3 {
            return Err(Error::Config(format!("degree must be in 0..=3, got {}", self.degree)));
        }
        if self.n_cells == 0 {
            return Err(Error::Config("cells must be positive".into()));
        }
        if let Some(t) = self.t_final {
            if !(t >= 0.0) {
                return Err(Error::Config(format!("tfinal must be >= 0, got {t}")));
            }
        }
        if let Some(c) = self.cfl_fraction {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::Config(format!("cfl must be in (0, 1], got {c}")));
            }
        }
        if !(self.gamma > 1.0) {
            return Err(Error::Config(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.epsilon)));
        }
        if let Problem::Riemann { left, right, x0, domain } = self.problem {
            if !(left.rho > 0.0 && right.rho > 0.0 && left.p > 0.0 && right.p > 0.0) {
                return Err(Error::Config("Riemann states need positive density and pressure".into()));
            }
            if !(x0 > domain.0 && x0 < domain.1) {
                return Err(Error::Config("x0 must lie inside the domain".into()));
            }
        }
        Ok(())
    }

    pub fn evolve_config(&self, t_final: f64) -> EvolveConfig {
        EvolveConfig {
            limiter: self.limiter,
            integrator: self.integrator,
            placement: self.placement,
            cfl_fraction: self.cfl_fraction.unwrap_or_else(|| self.integrator.default_cfl_fraction()),
            t_final,
        }
    }

    /// Output path with the output-directory override applied to relative paths.
    pub fn resolved_output(&self, default: &str) -> PathBuf {
        resolve_output(self.output_path.as_deref().unwrap_or(Path::new(default)))
    }
}

pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}
