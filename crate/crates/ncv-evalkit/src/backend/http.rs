//! OpenAI-compatible chat-completions client with bounded retry.

use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

use super::{
    BackendError, ChatMessage, CompletionBackend, CompletionRequest, CompletionResponse,
    FinishReason, TokenCounts,
};

/// Env var overriding the backend base URL.
pub const ENV_BASE_URL: &str = "NCV_BASE_URL";
/// Env var holding the API key; `OPENAI_API_KEY` is the fallback.
pub const ENV_API_KEY: &str = "NCV_API_KEY";

#[derive(Debug, Clone)]
pub struct HttpBackendConfig {
    /// Server root; the client appends `/v1/chat/completions`.
    pub base_url: String,
    pub api_key: Option<String>,
    /// Additional attempts after the first on 429/5xx/transport failures.
    pub max_retries: u32,
    pub request_timeout: Duration,
    /// First retry delay; doubles per attempt.
    pub retry_base_delay: Duration,
}

impl Default for HttpBackendConfig {
    fn default() -> Self {
        Self {
            base_url: "http://localhost:8000".into(),
            api_key: None,
            max_retries: 3,
            request_timeout: Duration::from_secs(120),
            retry_base_delay: Duration::from_millis(250),
        }
    }
}

impl HttpBackendConfig {
    /// Apply `NCV_BASE_URL` and `NCV_API_KEY`/`OPENAI_API_KEY` overrides.
    pub fn with_env_overrides(mut self) -> Self {
        if let Ok(url) = std::env::var(ENV_BASE_URL) {
            self.base_url = url;
        }
        if self.api_key.is_none() {
            self.api_key = std::env::var(ENV_API_KEY)
                .or_else(|_| std::env::var("OPENAI_API_KEY"))
                .ok();
        }
        self
    }
}

pub struct HttpBackend {
    config: HttpBackendConfig,
    client: reqwest::Client,
}

/// Request body on the wire; field names follow the chat-completions schema.
#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    max_tokens: u32,
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Deserialize)]
struct WireResponse {
    choices: Vec<WireChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct WireChoice {
    message: WireMessage,
    #[serde(default)]
    finish_reason: Option<String>,
}

#[derive(Deserialize)]
struct WireMessage {
    content: String,
}

#[derive(Deserialize, Default)]
struct WireUsage {
    prompt_tokens: u64,
    completion_tokens: u64,
}

fn map_finish_reason(raw: Option<&str>) -> FinishReason {
    match raw {
        Some("stop") | None => FinishReason::Stop,
        Some("length") => FinishReason::Length,
        Some(_) => FinishReason::Error,
    }
}

impl HttpBackend {
    pub fn new(config: HttpBackendConfig) -> Result<Self, BackendError> {
        let client = reqwest::Client::builder()
            .timeout(config.request_timeout)
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(Self { config, client })
    }

    fn endpoint(&self) -> String {
        format!("{}/v1/chat/completions", self.config.base_url.trim_end_matches('/'))
    }

    /// Serialize `request` exactly as it goes on the wire.
    pub fn wire_body(request: &CompletionRequest) -> Vec<u8> {
        serde_json::to_vec(&WireRequest {
            model: &request.model,
            messages: &request.messages,
            max_tokens: request.max_completion_tokens,
            temperature: request.temperature,
            seed: request.sample_seed,
        })
        .expect("wire request serializes")
    }

    /// Map a raw response body to a `CompletionResponse`.
    pub fn parse_body(body: &[u8]) -> Result<CompletionResponse, BackendError> {
        let wire: WireResponse = serde_json::from_slice(body)
            .map_err(|e| BackendError::MalformedResponse(e.to_string()))?;
        let choice = wire
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| BackendError::MalformedResponse("no choices".into()))?;
        let usage = wire.usage.unwrap_or_default();
        Ok(CompletionResponse {
            text: choice.message.content,
            usage: TokenCounts {
                prompt_tokens: usage.prompt_tokens,
                completion_tokens: usage.completion_tokens,
            },
            finish_reason: map_finish_reason(choice.finish_reason.as_deref()),
        })
    }

    async fn send_once(&self, body: &[u8]) -> Result<CompletionResponse, BackendError> {
        let mut builder = self
            .client
            .post(self.endpoint())
            .header(reqwest::header::CONTENT_TYPE, "application/json")
            .body(body.to_vec());
        if let Some(key) = &self.config.api_key {
            builder = builder.bearer_auth(key);
        }

        let response = builder.send().await.map_err(|e| {
            if e.is_timeout() {
                BackendError::Timeout
            } else {
                BackendError::Transport(e.to_string())
            }
        })?;

        let status = response.status();
        let bytes = response
            .bytes()
            .await
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(BackendError::Http {
                status: status.as_u16(),
                body: String::from_utf8_lossy(&bytes).into_owned(),
            });
        }
        Self::parse_body(&bytes)
    }
}

fn is_retryable(error: &BackendError) -> bool {
    match error {
        BackendError::Http { status, .. } => *status == 429 || *status >= 500,
        BackendError::Transport(_) | BackendError::Timeout => true,
        BackendError::BadRequest(_) | BackendError::MalformedResponse(_) => false,
    }
}

#[async_trait]
impl CompletionBackend for HttpBackend {
    async fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.validate()?;
        let body = Self::wire_body(request);

        let mut delay = self.config.retry_base_delay;
        let mut attempt = 0;
        loop {
            match self.send_once(&body).await {
                Ok(response) => return Ok(response),
                Err(error) if is_retryable(&error) && attempt < self.config.max_retries => {
                    attempt += 1;
                    tokio::time::sleep(delay).await;
                    delay *= 2;
                }
                Err(error) => return Err(error),
            }
        }
    }
}
