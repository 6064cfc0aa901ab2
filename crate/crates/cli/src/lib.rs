//! Batch front-end: JSON run configs in, diagnostics tables out.

pub mod config;
pub mod initial;
pub mod output;
pub mod run;

use std::path::Path;

use thiserror::Error;

pub use config::{parse_config, parse_with_overrides, Method, OutputFormat, RawConfig, RunConfig};
pub use initial::InitialStateSpec;
pub use run::{run_simulation, RunOutput};

/// Process exit status when every row was produced but a tolerance guard tripped.
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("config schema: {0}")]
    Schema(String),
    #[error("bad override: {0}")]
    Override(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] dampjc_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Renders `out` in the configured format.
pub fn render(cfg: &RunConfig, out: &RunOutput) -> String {
    match cfg.raw.output_format {
        OutputFormat::Csv => output::to_csv(out),
        OutputFormat::Json => output::to_json(out, &cfg.raw),
    }
}

pub fn read_config(path: &Path, overrides: &[String]) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_with_overrides(&text, overrides)
}

/// Forces the oracle comparison on and fills in the default study grid.
pub fn as_error_study(mut cfg: RunConfig) -> Result<RunConfig, CliError> {
    if cfg.method().zassenhaus_order().is_none() {
        return Err(CliError::Invalid(
            "error-study requires method zassenhaus2 or zassenhaus3".into(),
        ));
    }
    cfg.raw.compare_oracle = true;
    cfg.raw
        .error_study
        .get_or_insert_with(|| config::DEFAULT_ERROR_STUDY.to_vec());
    Ok(cfg)
}

/// Runs `cfg` and writes the table to `outputPath` or stdout. Returns the exit status.
pub fn execute(cfg: &RunConfig, threads: usize) -> Result<i32, CliError> {
    let out = run_simulation(cfg, threads)?;
    let text = render(cfg, &out);
    match &cfg.raw.output_path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(if out.guards.is_empty() { 0 } else { EXIT_GUARD })
}
