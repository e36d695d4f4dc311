//! TOML configuration documents. Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use oscillab_core::IntegratorConfig;
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub system: SystemConfig,
    /// Initial value of every state field, keyed by field name.
    pub initial: BTreeMap<String, f64>,
    pub time: TimeSpan,
    #[serde(default)]
    pub integrator: IntegratorSection,
    /// Invariants to track; all invariants of the system when omitted.
    #[serde(default)]
    pub invariants: Option<Vec<String>>,
    pub output: ScenarioOutput,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    Ml1d {
        lambda: f64,
        alpha: f64,
    },
    Ml2dHamiltonian {
        lambda: f64,
        alpha: f64,
        #[serde(default)]
        potential: PotentialKind,
    },
    Harmonic2d {
        n1: u32,
        n2: u32,
        omega0: f64,
    },
    Nonstd1dFree {
        k: f64,
    },
    Nonstd1dOmega {
        k: f64,
        omega: f64,
    },
    Nonstd2d {
        k1: f64,
        k2: f64,
        /// Rational-frequency variant when present, free variant otherwise.
        #[serde(default)]
        frequencies: Option<FrequencyConfig>,
    },
    IsochronyPiecewise {
        omega1: f64,
        omega2: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// `r²/(1+λr²)`
    #[default]
    Oscillator,
    Free,
    /// `r²` independent of λ
    Harmonic,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyConfig {
    pub n1: u32,
    pub n2: u32,
    pub omega0: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpan {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub sample_dt: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            rel_tol: d.rel_tol,
            abs_tol: d.abs_tol,
            h_init: d.h_init,
            h_min: d.h_min,
            h_max: d.h_max,
            max_steps: d.max_steps,
            sample_dt: d.sample_dt,
        }
    }
}

impl From<IntegratorSection> for IntegratorConfig {
    fn from(s: IntegratorSection) -> Self {
        IntegratorConfig {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            h_init: s.h_init,
            h_min: s.h_min,
            h_max: s.h_max,
            max_steps: s.max_steps,
            sample_dt: s.sample_dt,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOutput {
    pub trajectory: PathBuf,
    pub report: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub schema_version: u32,
    pub lambda: f64,
    /// Exactly one of `alpha` and `beta` must be given.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    pub n_levels: usize,
    pub grid: GridSection,
    pub output: SpectrumOutput,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_points: usize,
    #[serde(default)]
    pub q_max: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumOutput {
    pub report: PathBuf,
}

fn check_version(found: u32) -> Result<(), CliError> {
    if found != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "unsupported schema_version {found} (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, CliError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    check_version(cfg.schema_version)?;
    Ok(cfg)
}

pub fn parse_spectrum(text: &str) -> Result<SpectrumConfig, CliError> {
    let cfg: SpectrumConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    check_version(cfg.schema_version)?;
    Ok(cfg)
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, CliError> {
    parse_scenario(&read(path)?)
}

pub fn load_spectrum(path: &Path) -> Result<SpectrumConfig, CliError> {
    parse_spectrum(&read(path)?)
}

/// Output paths are relative to the directory holding the config file.
pub fn resolve_output(config_path: &Path, target: &Path) -> PathBuf {
    if target.is_absolute() {
        return target.to_path_buf();
    }
    match config_path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(target),
        _ => target.to_path_buf(),
    }
}
