//! Run options from an optional JSON file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use bcnf_core::Params;
use serde::Deserialize;

pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_MAX_PERIOD: usize = 10;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_BUDGET: usize = 1000;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Every field is optional so that a file and the flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(rename = "tau_L")]
    pub tau_l: Option<f64>,
    #[serde(rename = "delta_L")]
    pub delta_l: Option<f64>,
    #[serde(rename = "tau_R")]
    pub tau_r: Option<f64>,
    #[serde(rename = "delta_R")]
    pub delta_r: Option<f64>,
    pub eps: Option<f64>,
    pub max_period: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub budget: Option<usize>,
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Values set in `top` win over those in `self`.
    pub fn layered(self, top: Overrides) -> Overrides {
        Overrides {
            tau_l: top.tau_l.or(self.tau_l),
            delta_l: top.delta_l.or(self.delta_l),
            tau_r: top.tau_r.or(self.tau_r),
            delta_r: top.delta_r.or(self.delta_r),
            eps: top.eps.or(self.eps),
            max_period: top.max_period.or(self.max_period),
            seed: top.seed.or(self.seed),
            out: top.out.or(self.out),
            format: top.format.or(self.format),
            budget: top.budget.or(self.budget),
            tol: top.tol.or(self.tol),
        }
    }

    pub fn resolve(self) -> anyhow::Result<RunConfig> {
        let cfg = RunConfig {
            tau_l: self.tau_l,
            delta_l: self.delta_l,
            tau_r: self.tau_r,
            delta_r: self.delta_r,
            eps: self.eps.unwrap_or(DEFAULT_EPS),
            max_period: self.max_period.unwrap_or(DEFAULT_MAX_PERIOD),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            out: self.out,
            format: self.format.unwrap_or_default(),
            budget: self.budget.unwrap_or(DEFAULT_BUDGET),
            tol: self.tol.unwrap_or(DEFAULT_TOL),
        };
        if [cfg.tau_l, cfg.delta_l, cfg.tau_r, cfg.delta_r]
            .iter()
            .flatten()
            .any(|v| !v.is_finite())
        {
            bail!("parameters must be finite");
        }
        if !(cfg.eps > 0.0 && cfg.eps.is_finite()) {
            bail!("--eps must be positive, got {}", cfg.eps);
        }
        if cfg.max_period == 0 {
            bail!("--max-period must be at least 1");
        }
        if !(cfg.tol >= 0.0 && cfg.tol.is_finite()) {
            bail!("--tol must be a finite non-negative number");
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tau_l: Option<f64>,
    pub delta_l: Option<f64>,
    pub tau_r: Option<f64>,
    pub delta_r: Option<f64>,
    pub eps: f64,
    pub max_period: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub budget: usize,
    pub tol: f64,
}

impl RunConfig {
    pub fn require_params(&self) -> anyhow::Result<Params> {
        match (self.tau_l, self.delta_l, self.tau_r, self.delta_r) {
            (Some(a), Some(b), Some(c), Some(d)) => Ok(Params::new(a, b, c, d)),
            _ => bail!("parameters required: --tau-l, --delta-l, --tau-r, --delta-r"),
        }
    }
}
