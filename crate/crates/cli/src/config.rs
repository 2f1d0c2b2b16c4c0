//! JSON run configurations. Every field is optional; command-line flags win.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        CliError::Usage(format!("invalid config {} at `{at}`: {}", path.display(), e.into_inner()))
    })
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaGrid {
    pub theta: Option<Vec<f64>>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub theta_steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoQubitConfig {
    #[serde(default)]
    pub grid: ThetaGrid,
    pub lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdpSweepConfig {
    #[serde(default)]
    pub grid: ThetaGrid,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JcConfig {
    pub g: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub quadratic: Option<bool>,
    pub workers: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitQubitInput {
    pub big_m: Option<f64>,
    pub m: Option<f64>,
    pub delta_big_x: Option<f64>,
    pub delta_x: Option<f64>,
    pub d: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorInput {
    pub big_m: Option<f64>,
    pub frequency: Option<f64>,
    /// Branch distances from the sphere surface (m).
    pub surface_l: Option<f64>,
    pub surface_r: Option<f64>,
    pub density: Option<f64>,
    pub target_w: Option<f64>,
    pub tau: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    #[serde(default)]
    pub qubit_qubit: QubitQubitInput,
    #[serde(default)]
    pub oscillator: OscillatorInput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoccConfig {
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub memory_dim: Option<usize>,
    pub include_identity: Option<bool>,
    pub tol: Option<f64>,
    pub workers: Option<usize>,
}
