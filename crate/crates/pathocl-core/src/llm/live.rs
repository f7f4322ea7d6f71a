//! Live OpenAI-compatible chat-completions backend with bounded
//! exponential backoff and a shared token-bucket rate limiter.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::llm::{
    input_cost_usd, strip_fences, BackendKind, Completion, GenerationConfig, Generator, LlmError,
};
use crate::prompt::PromptBundle;

/// Environment variable naming the chat-completions endpoint URL.
pub const ENDPOINT_ENV: &str = "PATHOCL_ENDPOINT";
/// Environment variable holding the bearer credential (optional for
/// keyless local servers).
pub const API_KEY_ENV: &str = "PATHOCL_API_KEY";

#[derive(Debug, Clone)]
pub struct LiveConfig {
    pub endpoint: String,
    pub api_key: Option<String>,
    pub max_retries: u32,
    pub base_delay: Duration,
    /// Requests per second sustained by the token bucket.
    pub requests_per_second: f64,
}

impl LiveConfig {
    pub fn from_env() -> Result<LiveConfig, LlmError> {
        let endpoint = std::env::var(ENDPOINT_ENV).map_err(|_| {
            LlmError::Config(format!(
                "live backend requires the {ENDPOINT_ENV} environment variable"
            ))
        })?;
        Ok(LiveConfig {
            endpoint,
            api_key: std::env::var(API_KEY_ENV).ok(),
            max_retries: 3,
            base_delay: Duration::from_millis(250),
            requests_per_second: 2.0,
        })
    }
}

/// Token bucket; `acquire` blocks until a token is available.
pub struct RateLimiter {
    capacity: f64,
    refill_per_sec: f64,
    state: Mutex<(f64, Instant)>,
}

impl RateLimiter {
    pub fn new(capacity: f64, refill_per_sec: f64) -> RateLimiter {
        RateLimiter {
            capacity,
            refill_per_sec,
            state: Mutex::new((capacity, Instant::now())),
        }
    }

    /// Seconds to wait before a token can be taken; 0 when one is taken now.
    fn try_take(&self) -> f64 {
        let mut state = self.state.lock().expect("rate limiter lock");
        let (ref mut tokens, ref mut last) = *state;
        let now = Instant::now();
        *tokens = (*tokens + now.duration_since(*last).as_secs_f64() * self.refill_per_sec)
            .min(self.capacity);
        *last = now;
        if *tokens >= 1.0 {
            *tokens -= 1.0;
            0.0
        } else {
            (1.0 - *tokens) / self.refill_per_sec
        }
    }

    pub fn acquire(&self) {
        loop {
            let wait = self.try_take();
            if wait <= 0.0 {
                return;
            }
            std::thread::sleep(Duration::from_secs_f64(wait.min(1.0)));
        }
    }
}

/// Delay before retry `attempt` (0-based): base * 2^attempt, capped at 8s.
pub fn backoff_delay(base: Duration, attempt: u32) -> Duration {
    base.saturating_mul(1u32 << attempt.min(16)).min(Duration::from_secs(8))
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    max_tokens: u32,
    messages: [ChatMessage<'a>; 2],
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
}

#[derive(Deserialize)]
struct ResponseMessage {
    content: Option<String>,
}

#[derive(Deserialize)]
struct Usage {
    prompt_tokens: u64,
    completion_tokens: u64,
}

pub struct LiveBackend {
    config: LiveConfig,
    client: reqwest::blocking::Client,
    limiter: RateLimiter,
}

impl LiveBackend {
    pub fn new(config: LiveConfig) -> LiveBackend {
        let limiter = RateLimiter::new(
            config.requests_per_second.max(1.0),
            config.requests_per_second,
        );
        LiveBackend {
            config,
            client: reqwest::blocking::Client::new(),
            limiter,
        }
    }

    pub fn from_env() -> Result<LiveBackend, LlmError> {
        Ok(LiveBackend::new(LiveConfig::from_env()?))
    }

    fn attempt(
        &self,
        bundle: &PromptBundle,
        cfg: &GenerationConfig,
    ) -> Result<Completion, AttemptError> {
        let request = ChatRequest {
            model: &cfg.model_name,
            temperature: cfg.temperature,
            max_tokens: cfg.max_output_tokens,
            messages: [
                ChatMessage {
                    role: "system",
                    content: &bundle.system_text,
                },
                ChatMessage {
                    role: "user",
                    content: &bundle.user_text,
                },
            ],
        };
        let mut builder = self.client.post(&self.config.endpoint).json(&request);
        if let Some(key) = &self.config.api_key {
            builder = builder.bearer_auth(key);
        }
        let response = builder
            .send()
            .map_err(|e| AttemptError::Retryable(e.to_string()))?;
        let status = response.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(AttemptError::Retryable(format!("status {status}")));
        }
        if !status.is_success() {
            return Err(AttemptError::Fatal(format!("status {status}")));
        }
        let body: ChatResponse = response
            .json()
            .map_err(|e| AttemptError::Fatal(format!("invalid response body: {e}")))?;
        let text = body
            .choices
            .first()
            .and_then(|c| c.message.content.clone())
            .ok_or_else(|| AttemptError::Fatal("response carries no content".to_string()))?;
        // fall back to the desk estimate when the provider omits usage
        let (input_tokens, output_tokens) = body
            .usage
            .map(|u| (u.prompt_tokens, u.completion_tokens))
            .unwrap_or((bundle.approx_tokens, 0));
        Ok(Completion {
            text: strip_fences(&text),
            input_tokens,
            output_tokens,
            cost_usd: input_cost_usd(input_tokens, cfg),
            backend: BackendKind::Live,
        })
    }
}

enum AttemptError {
    Retryable(String),
    Fatal(String),
}

impl Generator for LiveBackend {
    fn generate(
        &self,
        bundle: &PromptBundle,
        cfg: &GenerationConfig,
    ) -> Result<Completion, LlmError> {
        let attempts = self.config.max_retries + 1;
        let mut last_message = String::new();
        for attempt in 0..attempts {
            self.limiter.acquire();
            match self.attempt(bundle, cfg) {
                Ok(completion) => return Ok(completion),
                Err(AttemptError::Fatal(message)) => {
                    return Err(LlmError::Exhausted {
                        attempts: attempt + 1,
                        message,
                    })
                }
                Err(AttemptError::Retryable(message)) => {
                    last_message = message;
                    if attempt + 1 < attempts {
                        std::thread::sleep(backoff_delay(self.config.base_delay, attempt));
                    }
                }
            }
        }
        Err(LlmError::Exhausted {
            attempts,
            message: last_message,
        })
    }
}
