//! JSON-over-HTTP backends.
//!
//! Wire formats:
//!
//! - embedding: `POST {"model", "texts": [..]}` -> `{"embeddings": [[..], ..]}`
//! - NLI: `POST {"premise", "hypothesis"}` -> `{"entailment", "contradiction", "neutral"}`
//! - completion: `POST {"model", "prompt", "max_tokens", "temperature": 0}` ->
//!   `{"choices": [{"text"}]}` or `{"text"}`
//!
//! Requests time out, are retried with exponential backoff on timeouts,
//! transport errors, 429 and 5xx, and are limited to a fixed number in flight.
//! The API key is read from the named environment variable at call time and
//! only ever placed in the `Authorization` header.

use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{BackendError, CompletionBackend, EmbeddingBackend, NliBackend, NliProbabilities};

#[derive(Debug, Clone)]
pub struct HttpSettings {
    pub url: String,
    pub api_key_env: Option<String>,
    pub timeout: Duration,
    pub max_retries: u32,
    pub max_in_flight: usize,
    pub backoff_base: Duration,
}

struct InFlight {
    count: Mutex<usize>,
    freed: Condvar,
    limit: usize,
}

struct Permit<'a>(&'a InFlight);

impl InFlight {
    fn acquire(&self) -> Permit<'_> {
        let mut n = self.count.lock().unwrap_or_else(|e| e.into_inner());
        while *n >= self.limit {
            n = self.freed.wait(n).unwrap_or_else(|e| e.into_inner());
        }
        *n += 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let mut n = self.0.count.lock().unwrap_or_else(|e| e.into_inner());
        *n -= 1;
        self.0.freed.notify_one();
    }
}

pub struct HttpClient {
    settings: HttpSettings,
    agent: ureq::Agent,
    in_flight: InFlight,
}

impl std::fmt::Debug for HttpClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpClient")
            .field("url", &self.settings.url)
            .field("api_key_env", &self.settings.api_key_env)
            .finish_non_exhaustive()
    }
}

enum Attempt {
    Retry(BackendError),
    Fatal(BackendError),
}

impl HttpClient {
    pub fn new(settings: HttpSettings) -> Result<Self, BackendError> {
        if settings.max_in_flight == 0 {
            return Err(BackendError::Config("max_in_flight must be at least 1".into()));
        }
        url::Url::parse(&settings.url).map_err(|e| BackendError::Config(format!("bad url {}: {e}", settings.url)))?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(settings.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let in_flight = InFlight { count: Mutex::new(0), freed: Condvar::new(), limit: settings.max_in_flight };
        Ok(Self { settings, agent, in_flight })
    }

    pub fn url(&self) -> &str {
        &self.settings.url
    }

    /// POST `body` as JSON and decode the JSON response.
    pub fn post_json<Req: Serialize, Resp: DeserializeOwned>(&self, body: &Req) -> Result<Resp, BackendError> {
        let mut attempt = 0;
        loop {
            attempt += 1;
            let result = {
                let _permit = self.in_flight.acquire();
                self.try_once(body)
            };
            match result {
                Ok(text) => {
                    return serde_json::from_str(&text).map_err(|e| BackendError::Malformed(e.to_string()));
                }
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(e)) => {
                    if attempt > self.settings.max_retries {
                        return Err(match e {
                            BackendError::Timeout { .. } => BackendError::Timeout { attempts: attempt },
                            other => other,
                        });
                    }
                    let backoff = self.settings.backoff_base.saturating_mul(1 << (attempt - 1).min(16));
                    tracing::warn!(url = %self.settings.url, attempt, error = %e, "backend call failed; retrying");
                    std::thread::sleep(backoff);
                }
            }
        }
    }

    fn try_once<Req: Serialize>(&self, body: &Req) -> Result<String, Attempt> {
        let mut req = self.agent.post(&self.settings.url).header("Content-Type", "application/json");
        if let Some(var) = &self.settings.api_key_env {
            match std::env::var(var) {
                Ok(key) => req = req.header("Authorization", format!("Bearer {key}")),
                Err(_) => {
                    return Err(Attempt::Fatal(BackendError::Config(format!(
                        "environment variable {var} is not set"
                    ))))
                }
            }
        }
        let payload = serde_json::to_vec(body).map_err(|e| Attempt::Fatal(BackendError::Malformed(e.to_string())))?;
        let mut resp = match req.send(&payload[..]) {
            Ok(r) => r,
            Err(ureq::Error::Timeout(_)) => return Err(Attempt::Retry(BackendError::Timeout { attempts: 1 })),
            Err(ureq::Error::Io(e)) if e.kind() == std::io::ErrorKind::TimedOut => {
                return Err(Attempt::Retry(BackendError::Timeout { attempts: 1 }))
            }
            Err(e) => return Err(Attempt::Retry(BackendError::Transport(e.to_string()))),
        };
        let status = resp.status().as_u16();
        let text = match resp.body_mut().read_to_string() {
            Ok(t) => t,
            Err(ureq::Error::Timeout(_)) => return Err(Attempt::Retry(BackendError::Timeout { attempts: 1 })),
            Err(e) => return Err(Attempt::Retry(BackendError::Transport(e.to_string()))),
        };
        if (200..300).contains(&status) {
            return Ok(text);
        }
        let err = BackendError::Status { status, body: text.chars().take(200).collect() };
        if status == 429 || status >= 500 {
            Err(Attempt::Retry(err))
        } else {
            Err(Attempt::Fatal(err))
        }
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<&'a str>,
    texts: &'a [String],
}

#[derive(Deserialize)]
struct EmbedResponse {
    embeddings: Vec<Vec<f64>>,
}

#[derive(Debug)]
pub struct HttpEmbedding {
    client: HttpClient,
    model: Option<String>,
    dimension: usize,
    normalized: bool,
}

impl HttpEmbedding {
    pub fn new(client: HttpClient, model: Option<String>, dimension: usize, normalized: bool) -> Self {
        Self { client, model, dimension, normalized }
    }
}

impl EmbeddingBackend for HttpEmbedding {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let resp: EmbedResponse = self.client.post_json(&EmbedRequest { model: self.model.as_deref(), texts })?;
        if resp.embeddings.len() != texts.len() {
            return Err(BackendError::Malformed(format!(
                "asked for {} embeddings, got {}",
                texts.len(),
                resp.embeddings.len()
            )));
        }
        if let Some(bad) = resp.embeddings.iter().find(|v| v.len() != self.dimension) {
            return Err(BackendError::DimensionMismatch { expected: self.dimension, got: bad.len() });
        }
        Ok(resp.embeddings)
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn normalized(&self) -> bool {
        self.normalized
    }
}

#[derive(Serialize)]
struct NliRequest<'a> {
    premise: &'a str,
    hypothesis: &'a str,
}

#[derive(Debug)]
pub struct HttpNli {
    client: HttpClient,
}

impl HttpNli {
    pub fn new(client: HttpClient) -> Self {
        Self { client }
    }
}

impl NliBackend for HttpNli {
    fn classify(&self, premise: &str, hypothesis: &str) -> Result<NliProbabilities, BackendError> {
        let probs: NliProbabilities = self.client.post_json(&NliRequest { premise, hypothesis })?;
        probs.validate()?;
        Ok(probs)
    }
}

#[derive(Serialize)]
struct CompletionRequest<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<&'a str>,
    prompt: &'a str,
    max_tokens: u32,
    temperature: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CompletionResponse {
    Choices { choices: Vec<Choice> },
    Text { text: String },
}

#[derive(Deserialize)]
struct Choice {
    text: String,
}

#[derive(Debug)]
pub struct HttpCompletion {
    client: HttpClient,
    model: Option<String>,
    max_tokens: u32,
}

impl HttpCompletion {
    pub fn new(client: HttpClient, model: Option<String>, max_tokens: u32) -> Self {
        Self { client, model, max_tokens }
    }
}

impl CompletionBackend for HttpCompletion {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        let req = CompletionRequest { model: self.model.as_deref(), prompt, max_tokens: self.max_tokens, temperature: 0.0 };
        match self.client.post_json::<_, CompletionResponse>(&req)? {
            CompletionResponse::Text { text } => Ok(text),
            CompletionResponse::Choices { choices } => choices
                .into_iter()
                .next()
                .map(|c| c.text)
                .ok_or_else(|| BackendError::Malformed("completion response has no choices".into())),
        }
    }
}
