//! `oscillab spectrum`: ladder levels against the discretized Hamiltonian.

use std::path::Path;

use oscillab_core::quantum::{spectrum_report, BoundStates, GridSpec, QuantumParams, SpectrumReport};
use serde::Serialize;

use crate::config::{load_spectrum, resolve_output, SpectrumConfig, SCHEMA_VERSION};
use crate::error::CliError;
use crate::output::{to_json, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BoundStatesField {
    Finite(usize),
    Infinite(&'static str),
}

impl From<BoundStates> for BoundStatesField {
    fn from(b: BoundStates) -> Self {
        match b {
            BoundStates::Finite(n) => BoundStatesField::Finite(n),
            BoundStates::Infinite => BoundStatesField::Infinite("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDocument {
    pub schema_version: u32,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub n_points: usize,
    pub q_max: f64,
    pub ladder: Vec<f64>,
    pub numeric: Vec<f64>,
    pub abs_diff: Vec<f64>,
    pub max_abs_diff: f64,
    pub bound_states: BoundStatesField,
    pub threshold: Option<f64>,
}

impl From<&SpectrumReport> for SpectrumDocument {
    fn from(r: &SpectrumReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            lambda: r.lambda,
            alpha: r.alpha,
            beta: r.beta,
            n_points: r.n_points,
            q_max: r.q_max,
            ladder: r.ladder.clone(),
            numeric: r.numeric.clone(),
            abs_diff: r.abs_diff.clone(),
            max_abs_diff: r.max_abs_diff(),
            bound_states: r.bound_states.into(),
            threshold: r.threshold,
        }
    }
}

pub fn params_from(cfg: &SpectrumConfig) -> Result<QuantumParams, CliError> {
    let p = match (cfg.alpha, cfg.beta) {
        (Some(a), None) => QuantumParams::from_alpha(cfg.lambda, a),
        (None, Some(b)) => QuantumParams::from_beta(cfg.lambda, b),
        _ => return Err(CliError::Config("exactly one of `alpha` and `beta` must be set".into())),
    };
    p.map_err(CliError::Validation)
}

pub fn spectrum(cfg: &SpectrumConfig) -> Result<SpectrumDocument, CliError> {
    let p = params_from(cfg)?;
    let request = GridSpec {
        n_points: cfg.grid.n_points,
        q_max: cfg.grid.q_max,
    };
    let report = spectrum_report(&p, &request, cfg.n_levels).map_err(CliError::Validation)?;
    Ok(SpectrumDocument::from(&report))
}

pub fn cmd_spectrum(config_path: &Path) -> Result<SpectrumDocument, CliError> {
    let cfg = load_spectrum(config_path)?;
    let doc = spectrum(&cfg)?;
    write_atomic(&resolve_output(config_path, &cfg.output.report), &to_json(&doc)?)?;
    Ok(doc)
}
