//! Run configuration: defaults, overridden by a TOML config file,
//! overridden by command-line flags.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use pathocl_core::llm::GenerationConfig;

/// Errors mapped to process exit codes: usage 1, data 2, backend 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Backend(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Backend(_) => 3,
        }
    }

    pub fn data(e: impl std::fmt::Display) -> CliError {
        CliError::Data(e.to_string())
    }

    pub fn backend(e: impl std::fmt::Display) -> CliError {
        CliError::Backend(e.to_string())
    }
}

/// Optional settings read from `--config <file>` (TOML).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model_file: Option<PathBuf>,
    pub specs_file: Option<PathBuf>,
    pub metric: Option<String>,
    pub k: Option<usize>,
    pub technique: Option<String>,
    pub backend: Option<String>,
    pub embedder: Option<String>,
    pub replay_fixture: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub max_path_len: Option<usize>,
    pub path_cap: Option<usize>,
    pub in_flight: Option<usize>,
    pub model_name: Option<String>,
    pub temperature: Option<f64>,
    pub max_output_tokens: Option<u32>,
    pub price_per_1k_input_tokens: Option<f64>,
    pub embed_endpoint: Option<String>,
    pub embed_model: Option<String>,
    pub embed_cache: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<FileConfig, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn generation_config(&self) -> GenerationConfig {
        let defaults = GenerationConfig::default();
        GenerationConfig {
            model_name: self.model_name.clone().unwrap_or(defaults.model_name),
            temperature: self.temperature.unwrap_or(defaults.temperature),
            max_output_tokens: self.max_output_tokens.unwrap_or(defaults.max_output_tokens),
            price_per_1k_input_tokens: self
                .price_per_1k_input_tokens
                .unwrap_or(defaults.price_per_1k_input_tokens),
        }
    }
}

/// Flag beats file beats default.
pub fn resolve<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Flag beats file; error when neither is present.
pub fn require<T>(flag: Option<T>, file: Option<T>, what: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing {what}: pass a flag or set it in the config file")))
}
