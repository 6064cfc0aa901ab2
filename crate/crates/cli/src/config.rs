//! Run configuration: the JSON document, `--set` overrides and validation.

use dampjc_core::{ModelParams, TruncationConfig, ZassenhausOrder};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::initial::InitialStateSpec;
use crate::CliError;

/// Default `t` grid for `error-study` when the config has none.
pub const DEFAULT_ERROR_STUDY: [f64; 5] = [0.025, 0.05, 0.1, 0.2, 0.4];

/// Default number of top Fock levels excluded from trusted identities.
pub const DEFAULT_MARGIN: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Zassenhaus2,
    Zassenhaus3,
    Expm,
    Rk4,
}

impl Method {
    pub fn zassenhaus_order(self) -> Option<ZassenhausOrder> {
        match self {
            Method::Zassenhaus2 => Some(ZassenhausOrder::Two),
            Method::Zassenhaus3 => Some(ZassenhausOrder::Three),
            Method::Expm | Method::Rk4 => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub qubit: String,
    pub cavity: String,
}

/// The config file exactly as written; echoed back in JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawConfig {
    pub omega0: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub mu: f64,
    pub nu: f64,
    pub dim: usize,
    #[serde(default = "default_margin")]
    pub margin: usize,
    pub initial: InitialSection,
    pub method: Method,
    pub t_max: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rk4_steps_per_sample: Option<usize>,
    #[serde(default)]
    pub compare_oracle: bool,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_study: Option<Vec<f64>>,
}

fn default_margin() -> usize {
    DEFAULT_MARGIN
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub params: ModelParams,
    pub initial: InitialStateSpec,
}

impl RunConfig {
    pub fn method(&self) -> Method {
        self.raw.method
    }

    /// Sample times `linspace(0, tMax, samples)`; a zero horizon collapses to one row.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.raw.samples;
        if self.raw.t_max == 0.0 || n == 1 {
            return vec![0.0];
        }
        (0..n)
            .map(|k| self.raw.t_max * k as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    parse_with_overrides(text, &[])
}

/// Parses `text`, applies `key=value` overrides, then validates.
pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| CliError::Json(e.to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let raw: RawConfig =
        serde_json::from_value(doc).map_err(|e| CliError::Schema(e.to_string()))?;
    validate(raw)
}

/// `key=value` with a dotted key for nested fields (`initial.cavity=fock:2`).
/// The value is read as JSON when it parses, as a string otherwise.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Override(format!("expected key=value, got '{assignment}'")))?;
    let value = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
    let mut target = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        target = target
            .as_object_mut()
            .and_then(|m| m.get_mut(*part))
            .ok_or_else(|| CliError::Override(format!("no section '{part}' for '{key}'")))?;
    }
    let obj = target
        .as_object_mut()
        .ok_or_else(|| CliError::Override(format!("'{key}' is not inside an object")))?;
    obj.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

pub fn validate(raw: RawConfig) -> Result<RunConfig, CliError> {
    let trunc = TruncationConfig::new(raw.dim, raw.margin)?;
    let params = ModelParams::new(raw.omega0, raw.omega, raw.mu, raw.nu, trunc)?;
    if raw.samples == 0 {
        return Err(CliError::Invalid("samples must be at least 1".into()));
    }
    if !raw.t_max.is_finite() || raw.t_max < 0.0 {
        return Err(CliError::Invalid(format!(
            "tMax must be finite and nonnegative, got {}",
            raw.t_max
        )));
    }
    match (raw.method, raw.rk4_steps_per_sample) {
        (Method::Rk4, None) => {
            return Err(CliError::Invalid(
                "method rk4 requires rk4StepsPerSample".into(),
            ))
        }
        (Method::Rk4, Some(0)) => {
            return Err(CliError::Invalid(
                "rk4StepsPerSample must be at least 1".into(),
            ))
        }
        (Method::Rk4, Some(_)) | (_, None) => {}
        (m, Some(_)) => {
            return Err(CliError::Invalid(format!(
                "rk4StepsPerSample is only valid for method rk4, not {m:?}"
            )))
        }
    }
    if let Some(ts) = &raw.error_study {
        if raw.method.zassenhaus_order().is_none() {
            return Err(CliError::Invalid(
                "errorStudy requires method zassenhaus2 or zassenhaus3".into(),
            ));
        }
        if ts.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(CliError::Invalid(
                "errorStudy values must be positive".into(),
            ));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Invalid(
                "errorStudy values must be strictly increasing".into(),
            ));
        }
    }
    let initial = InitialStateSpec::parse(&raw.initial.qubit, &raw.initial.cavity, raw.dim)?;
    Ok(RunConfig {
        raw,
        params,
        initial,
    })
}
