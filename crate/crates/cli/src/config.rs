//! Optional TOML config file. Keys mirror the long flag names; values given
//! on the command line take precedence.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub preset: Option<String>,
    pub omega_b: Option<f64>,
    pub delta: Option<f64>,
    pub g: Option<f64>,
    pub beta_b: Option<f64>,
    pub series_tol: Option<f64>,
    pub gamma: Option<f64>,
    pub s_shift: Option<f64>,
    pub table: Option<PathBuf>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub tol: Option<f64>,
    pub step: Option<f64>,
    pub gamma_minus: Option<f64>,
    pub decoherence_range: Option<[f64; 2]>,
    pub gamma_plus_range: Option<[f64; 2]>,
    pub resolution: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub perturb: Option<f64>,
    pub oracle_ops: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
