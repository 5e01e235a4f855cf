//! Deterministic scripted backend: substring rules over the rendered prompt,
//! each with a cyclic list of canned responses and synthesized token usage.

use std::path::Path;
use std::sync::Mutex;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use super::{
    BackendError, CompletionBackend, CompletionRequest, CompletionResponse, FinishReason,
    TokenCounts,
};

fn default_tokens_per_char() -> f64 {
    0.25
}

/// One prompt-matching rule. The first rule whose `match` substring occurs in
/// the prompt wins; its responses are served cyclically across calls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptedRule {
    #[serde(rename = "match")]
    pub match_substring: String,
    pub responses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptedBackendSpec {
    pub rules: Vec<ScriptedRule>,
    pub default_response: String,
    /// Usage synthesis ratio: tokens = ceil(chars * tokens_per_char).
    #[serde(default = "default_tokens_per_char")]
    pub tokens_per_char: f64,
}

impl Default for ScriptedBackendSpec {
    fn default() -> Self {
        Self {
            rules: Vec::new(),
            default_response: String::new(),
            tokens_per_char: default_tokens_per_char(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScriptedSpecError {
    #[error("cannot read scripted spec {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse scripted spec {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("rule {index} has no responses")]
    EmptyRule { index: usize },
    #[error("tokens_per_char must be positive, got {0}")]
    BadRatio(f64),
}

/// In-memory scripted backend. Cursor state is internal so concurrent callers
/// still drain each rule's response cycle in a deterministic multiset.
pub struct ScriptedBackend {
    spec: ScriptedBackendSpec,
    cursors: Mutex<Vec<usize>>,
}

impl ScriptedBackend {
    pub fn new(spec: ScriptedBackendSpec) -> Result<Self, ScriptedSpecError> {
        for (index, rule) in spec.rules.iter().enumerate() {
            if rule.responses.is_empty() {
                return Err(ScriptedSpecError::EmptyRule { index });
            }
        }
        if spec.tokens_per_char.is_nan() || spec.tokens_per_char <= 0.0 {
            return Err(ScriptedSpecError::BadRatio(spec.tokens_per_char));
        }
        let cursors = Mutex::new(vec![0; spec.rules.len()]);
        Ok(Self { spec, cursors })
    }

    pub fn from_file(path: &Path) -> Result<Self, ScriptedSpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScriptedSpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let spec = serde_json::from_str(&text).map_err(|source| ScriptedSpecError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        Self::new(spec)
    }

    pub fn spec(&self) -> &ScriptedBackendSpec {
        &self.spec
    }

    fn tokens_for(&self, text: &str) -> u64 {
        (text.chars().count() as f64 * self.spec.tokens_per_char).ceil() as u64
    }

    /// Longest prefix whose synthesized token count fits the budget.
    fn truncate_to_budget(&self, text: &str, max_tokens: u32) -> String {
        let max_chars = (max_tokens as f64 / self.spec.tokens_per_char).floor() as usize;
        text.chars().take(max_chars).collect()
    }

    fn next_response(&self, prompt: &str) -> String {
        let matched = self
            .spec
            .rules
            .iter()
            .position(|rule| prompt.contains(&rule.match_substring));
        match matched {
            Some(index) => {
                let mut cursors = self.cursors.lock().expect("cursor lock");
                let rule = &self.spec.rules[index];
                let response = rule.responses[cursors[index] % rule.responses.len()].clone();
                cursors[index] += 1;
                response
            }
            None => self.spec.default_response.clone(),
        }
    }
}

#[async_trait]
impl CompletionBackend for ScriptedBackend {
    async fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.validate()?;
        let prompt = request
            .messages
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n");

        let full = self.next_response(&prompt);
        let (text, finish_reason) = if self.tokens_for(&full) > u64::from(request.max_completion_tokens) {
            (self.truncate_to_budget(&full, request.max_completion_tokens), FinishReason::Length)
        } else {
            (full, FinishReason::Stop)
        };

        Ok(CompletionResponse {
            usage: TokenCounts {
                prompt_tokens: self.tokens_for(&prompt),
                completion_tokens: self.tokens_for(&text),
            },
            text,
            finish_reason,
        })
    }
}
