//! Declarative run configuration. A TOML file can set anything; CLI flags
//! override file values, which override built-in defaults.

use std::path::{Path, PathBuf};
use std::time::Duration;

use ncv_core::{ConsistencyStrategy, TieRule};
use serde::{Deserialize, Serialize};

use crate::backend::HttpBackendConfig;
use crate::baselines::BaselineConfig;
use crate::decomposer::{DecompositionConfig, DecompositionStrategy};
use crate::verifier::{VerifierConfig, VerifyMode};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub backend_url: Option<String>,
    pub api_key: Option<String>,
    /// Path to a scripted-backend spec; mutually exclusive with backend_url.
    pub scripted_spec: Option<PathBuf>,
    pub seed: Option<u64>,
    pub concurrency: Option<usize>,
    #[serde(default)]
    pub verifier: VerifierSection,
    #[serde(default)]
    pub baseline: BaselineSection,
    #[serde(default)]
    pub decomposer: DecomposerSection,
    #[serde(default)]
    pub backend: BackendSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifierSection {
    pub mode: Option<String>,
    pub k: Option<u32>,
    pub strategy: Option<String>,
    pub tie_rule: Option<String>,
    pub binary_max_completion_tokens: Option<u32>,
    pub reasoning_max_completion_tokens: Option<u32>,
    pub temperature_binary: Option<f64>,
    pub temperature_reasoning: Option<f64>,
    pub retry_on_unparseable: Option<u32>,
    pub binary_template_path: Option<PathBuf>,
    pub reasoning_template_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineSection {
    pub k: Option<u32>,
    pub max_completion_tokens: Option<u32>,
    pub temperature: Option<f64>,
    pub template_path: Option<PathBuf>,
    pub smallest_index_wins: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposerSection {
    pub strategy: Option<String>,
    pub max_nodes_per_step: Option<u32>,
    pub splitter_template_path: Option<PathBuf>,
    pub splitter_max_completion_tokens: Option<u32>,
    pub splitter_temperature: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSection {
    pub max_retries: Option<u32>,
    pub timeout_secs: Option<u64>,
    pub retry_base_delay_ms: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse config {path}: {source}")]
    Parse { path: String, source: toml::de::Error },
    #[error("cannot read template {path}: {source}")]
    Template { path: String, source: std::io::Error },
    #[error("invalid value for {field}: {value} (expected one of {expected})")]
    BadValue { field: &'static str, value: String, expected: &'static str },
}

pub fn load_config(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    toml::from_str(&text)
        .map_err(|source| ConfigError::Parse { path: path.display().to_string(), source })
}

pub fn parse_mode(value: &str) -> Result<VerifyMode, ConfigError> {
    match value {
        "binary" => Ok(VerifyMode::Binary),
        "cot" | "reasoning" => Ok(VerifyMode::Reasoning),
        other => Err(ConfigError::BadValue {
            field: "mode",
            value: other.to_string(),
            expected: "binary, cot",
        }),
    }
}

pub fn parse_strategy(value: &str) -> Result<ConsistencyStrategy, ConfigError> {
    match value {
        "vote" | "majority" => Ok(ConsistencyStrategy::MajorityVote),
        "veto" => Ok(ConsistencyStrategy::OneVoteVeto),
        other => Err(ConfigError::BadValue {
            field: "strategy",
            value: other.to_string(),
            expected: "vote, veto",
        }),
    }
}

pub fn parse_tie_rule(value: &str) -> Result<TieRule, ConfigError> {
    match value {
        "incorrect" | "tie_is_incorrect" => Ok(TieRule::TieIsIncorrect),
        "correct" | "tie_is_correct" => Ok(TieRule::TieIsCorrect),
        other => Err(ConfigError::BadValue {
            field: "tie_rule",
            value: other.to_string(),
            expected: "incorrect, correct",
        }),
    }
}

pub fn parse_decomposition_strategy(value: &str) -> Result<DecompositionStrategy, ConfigError> {
    match value {
        "identity" => Ok(DecompositionStrategy::Identity),
        "llm" | "llm_split" => Ok(DecompositionStrategy::LlmSplit),
        other => Err(ConfigError::BadValue {
            field: "decomposer.strategy",
            value: other.to_string(),
            expected: "identity, llm",
        }),
    }
}

fn read_template(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Template { path: path.display().to_string(), source })
}

/// CLI-level overrides that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub mode: Option<VerifyMode>,
    pub k: Option<u32>,
    pub strategy: Option<ConsistencyStrategy>,
}

impl FileConfig {
    /// Verifier config = defaults, overlaid with file values, overlaid with
    /// CLI overrides.
    pub fn verifier_config(&self, overrides: &CliOverrides) -> Result<VerifierConfig, ConfigError> {
        let mut config = VerifierConfig::default();
        let section = &self.verifier;
        if let Some(mode) = &section.mode {
            config.mode = parse_mode(mode)?;
        }
        if let Some(k) = section.k {
            config.consistency.k = k;
        }
        if let Some(strategy) = &section.strategy {
            config.consistency.strategy = parse_strategy(strategy)?;
        }
        if let Some(tie_rule) = &section.tie_rule {
            config.consistency.tie_rule = parse_tie_rule(tie_rule)?;
        }
        if let Some(v) = section.binary_max_completion_tokens {
            config.binary_max_completion_tokens = v;
        }
        if let Some(v) = section.reasoning_max_completion_tokens {
            config.reasoning_max_completion_tokens = v;
        }
        if let Some(v) = section.temperature_binary {
            config.temperature_binary = v;
        }
        if let Some(v) = section.temperature_reasoning {
            config.temperature_reasoning = v;
        }
        if let Some(v) = section.retry_on_unparseable {
            config.retry_on_unparseable = v;
        }
        if let Some(path) = &section.binary_template_path {
            config.templates.binary_node = read_template(path)?;
        }
        if let Some(path) = &section.reasoning_template_path {
            config.templates.reasoning_node = read_template(path)?;
        }

        if let Some(mode) = overrides.mode {
            config.mode = mode;
        }
        if let Some(k) = overrides.k {
            config.consistency.k = k;
        }
        if let Some(strategy) = overrides.strategy {
            config.consistency.strategy = strategy;
        }
        Ok(config)
    }

    /// Baseline config; the CLI `--k` override also selects greedy (k = 1,
    /// temperature 0) vs voting defaults.
    pub fn baseline_config(&self, k_override: Option<u32>) -> Result<BaselineConfig, ConfigError> {
        let k = k_override.or(self.baseline.k).unwrap_or(1);
        let mut config = if k <= 1 { BaselineConfig::greedy() } else { BaselineConfig::vote(k) };
        let section = &self.baseline;
        if let Some(v) = section.max_completion_tokens {
            config.max_completion_tokens = v;
        }
        if let Some(v) = section.temperature {
            config.temperature = v;
        }
        if let Some(v) = section.smallest_index_wins {
            config.smallest_index_wins = v;
        }
        if let Some(path) = &section.template_path {
            config.prompt_template = read_template(path)?;
        }
        Ok(config)
    }

    pub fn decomposition_config(&self) -> Result<DecompositionConfig, ConfigError> {
        let mut config = DecompositionConfig::default();
        let section = &self.decomposer;
        if let Some(strategy) = &section.strategy {
            config.strategy = parse_decomposition_strategy(strategy)?;
        }
        if let Some(v) = section.max_nodes_per_step {
            config.max_nodes_per_step = v.max(1);
        }
        if let Some(v) = section.splitter_max_completion_tokens {
            config.splitter_max_completion_tokens = v;
        }
        if let Some(v) = section.splitter_temperature {
            config.splitter_temperature = v;
        }
        if let Some(path) = &section.splitter_template_path {
            config.splitter_prompt_template = read_template(path)?;
        }
        Ok(config)
    }

    pub fn http_config(&self, url_override: Option<&str>) -> HttpBackendConfig {
        let mut config = HttpBackendConfig::default();
        if let Some(url) = url_override.map(str::to_string).or_else(|| self.backend_url.clone()) {
            config.base_url = url;
        }
        config.api_key = self.api_key.clone();
        let section = &self.backend;
        if let Some(v) = section.max_retries {
            config.max_retries = v;
        }
        if let Some(v) = section.timeout_secs {
            config.request_timeout = Duration::from_secs(v);
        }
        if let Some(v) = section.retry_base_delay_ms {
            config.retry_base_delay = Duration::from_millis(v);
        }
        config.with_env_overrides()
    }
}
