//! Completion-backend abstraction: one trait, an HTTP client speaking the
//! OpenAI-compatible chat-completions protocol, and a deterministic scripted
//! backend for offline tests.

pub mod http;
pub mod scripted;

use async_trait::async_trait;
use ncv_core::TokenUsage;
use serde::{Deserialize, Serialize};

pub use http::{HttpBackend, HttpBackendConfig};
pub use scripted::{ScriptedBackend, ScriptedBackendSpec, ScriptedRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self { role: Role::Assistant, content: content.into() }
    }
}

/// One completion call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub max_completion_tokens: u32,
    pub temperature: f64,
    /// Forwarded to servers that support seeded sampling; ignored elsewhere.
    pub sample_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("messages must be non-empty")]
    NoMessages,
    #[error("max_completion_tokens must be >= 1")]
    ZeroCompletionBudget,
}

impl CompletionRequest {
    pub fn validate(&self) -> Result<(), RequestError> {
        if self.messages.is_empty() {
            return Err(RequestError::NoMessages);
        }
        if self.max_completion_tokens == 0 {
            return Err(RequestError::ZeroCompletionBudget);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FinishReason {
    Stop,
    Length,
    Error,
}

/// Prompt/completion counters for a single call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCounts {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub text: String,
    pub usage: TokenCounts,
    pub finish_reason: FinishReason,
}

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("request rejected: {0}")]
    BadRequest(#[from] RequestError),
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("request timed out")]
    Timeout,
    #[error("malformed response: {0}")]
    MalformedResponse(String),
}

/// Anything that can answer chat-completion requests. Implementations must
/// tolerate concurrent calls.
#[async_trait]
pub trait CompletionBackend: Send + Sync {
    async fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError>;
}

/// Fold one response into a usage ledger.
pub fn record_usage(ledger: &mut TokenUsage, response: &CompletionResponse) {
    ledger.record(response.usage.prompt_tokens, response.usage.completion_tokens);
}
