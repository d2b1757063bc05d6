//! Model backend contracts: sentence embeddings, three-way NLI and text completion.
//!
//! Every pipeline stage talks to models only through these traits. The
//! default profile wires in the deterministic stubs from [`stub`], so the full
//! pipeline runs without network access; [`http`] provides JSON-over-HTTP
//! clients for hosted models.

pub mod http;
pub mod stub;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("request timed out after {attempts} attempt(s)")]
    Timeout { attempts: u32 },
    #[error("backend returned HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed backend response: {0}")]
    Malformed(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("backend misconfigured: {0}")]
    Config(String),
}

/// Maps texts to fixed-dimension vectors.
pub trait EmbeddingBackend: Send + Sync {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError>;
    fn dimension(&self) -> usize;
    /// Whether every returned vector has unit L2 norm.
    fn normalized(&self) -> bool;
}

/// Three-way natural language inference over a (premise, hypothesis) pair.
pub trait NliBackend: Send + Sync {
    fn classify(&self, premise: &str, hypothesis: &str) -> Result<NliProbabilities, BackendError>;
}

/// Prompt in, text out.
pub trait CompletionBackend: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, BackendError>;
}

/// Probability of each NLI label. Also the wire format of the NLI endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NliProbabilities {
    pub entailment: f64,
    pub contradiction: f64,
    pub neutral: f64,
}

impl NliProbabilities {
    pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

    pub fn certain_neutral() -> Self {
        Self { entailment: 0.0, contradiction: 0.0, neutral: 1.0 }
    }

    pub fn certain_entailment() -> Self {
        Self { entailment: 1.0, contradiction: 0.0, neutral: 0.0 }
    }

    pub fn certain_contradiction() -> Self {
        Self { entailment: 0.0, contradiction: 1.0, neutral: 0.0 }
    }

    /// Nonnegative, finite, and summing to one within [`Self::SIMPLEX_TOLERANCE`].
    pub fn validate(&self) -> Result<(), BackendError> {
        let ps = [self.entailment, self.contradiction, self.neutral];
        if ps.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(BackendError::Malformed(format!("negative or non-finite probability in {self:?}")));
        }
        let sum: f64 = ps.iter().sum();
        if (sum - 1.0).abs() > Self::SIMPLEX_TOLERANCE {
            return Err(BackendError::Malformed(format!("probabilities sum to {sum}")));
        }
        Ok(())
    }
}

/// Cosine of the angle between `u` and `v`, clamped to `[-1, 1]`.
///
/// A zero vector has no direction; the similarity is then defined as 0 and a
/// warning is logged. Panics if the lengths differ.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len(), "cosine_similarity on vectors of different dimension");
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        tracing::warn!("cosine similarity with a zero vector; using 0");
        return 0.0;
    }
    (dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0)
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Stub,
    Http,
}

/// One backend block of the pipeline config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    #[serde(default)]
    pub kind: BackendKind,
    #[serde(default)]
    pub url: Option<String>,
    /// Name of the environment variable holding the API key; never the key.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default)]
    pub model_name: Option<String>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub normalized: bool,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: f64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_max_in_flight")]
    pub max_in_flight: usize,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
}

fn default_timeout_secs() -> f64 {
    30.0
}
fn default_max_retries() -> u32 {
    3
}
fn default_max_in_flight() -> usize {
    8
}
fn default_max_tokens() -> u32 {
    256
}

impl Default for BackendConfig {
    fn default() -> Self {
        Self {
            kind: BackendKind::Stub,
            url: None,
            api_key_env: None,
            model_name: None,
            dimension: None,
            normalized: false,
            timeout_secs: default_timeout_secs(),
            max_retries: default_max_retries(),
            max_in_flight: default_max_in_flight(),
            max_tokens: default_max_tokens(),
        }
    }
}

impl BackendConfig {
    fn http_client(&self) -> Result<http::HttpClient, BackendError> {
        let url = self
            .url
            .clone()
            .ok_or_else(|| BackendError::Config("http backend requires `url`".into()))?;
        http::HttpClient::new(http::HttpSettings {
            url,
            api_key_env: self.api_key_env.clone(),
            timeout: std::time::Duration::from_secs_f64(self.timeout_secs),
            max_retries: self.max_retries,
            max_in_flight: self.max_in_flight,
            backoff_base: std::time::Duration::from_millis(200),
        })
    }
}

pub fn build_embedding(cfg: &BackendConfig) -> Result<Arc<dyn EmbeddingBackend>, BackendError> {
    Ok(match cfg.kind {
        BackendKind::Stub => Arc::new(stub::HashingEmbedder::new(cfg.dimension.unwrap_or(stub::STUB_DIMENSION))),
        BackendKind::Http => {
            let dimension = cfg
                .dimension
                .ok_or_else(|| BackendError::Config("http embedding backend requires `dimension`".into()))?;
            Arc::new(http::HttpEmbedding::new(cfg.http_client()?, cfg.model_name.clone(), dimension, cfg.normalized))
        }
    })
}

pub fn build_nli(cfg: &BackendConfig) -> Result<Arc<dyn NliBackend>, BackendError> {
    Ok(match cfg.kind {
        BackendKind::Stub => Arc::new(stub::RuleNli),
        BackendKind::Http => Arc::new(http::HttpNli::new(cfg.http_client()?)),
    })
}

pub fn build_completion(cfg: &BackendConfig) -> Result<Arc<dyn CompletionBackend>, BackendError> {
    Ok(match cfg.kind {
        BackendKind::Stub => Arc::new(stub::ExemplarCompletion),
        BackendKind::Http => Arc::new(http::HttpCompletion::new(
            cfg.http_client()?,
            cfg.model_name.clone(),
            cfg.max_tokens,
        )),
    })
}
