//! Pipeline configuration: one TOML document, overridable from the command line.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{
    build_completion, build_embedding, build_nli, BackendConfig, BackendError, BackendKind, CompletionBackend,
    EmbeddingBackend, NliBackend,
};
use crate::filter::FilterConfig;

pub const DATA_DIR_ENV: &str = "STORYLINK_DATA_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// `stub` runs every model in-process and deterministically, whatever the
/// backend blocks say; `live` uses the backend blocks as configured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Stub,
    Live,
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stub" => Ok(Profile::Stub),
            "live" => Ok(Profile::Live),
            other => Err(format!("unknown profile {other:?} (expected stub or live)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BackendProfiles {
    pub embedding: BackendConfig,
    pub nli: BackendConfig,
    pub completion: BackendConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ServerConfig {
    pub bind: String,
    pub port: u16,
    /// Allowed reader origins. Empty allows any origin.
    pub cors_origins: Vec<String>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self { bind: "127.0.0.1".into(), port: 8787, cors_origins: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub data_dir: PathBuf,
    pub profile: Profile,
    /// Seeds every random choice (currently negative sampling in evaluation).
    pub seed: u64,
    /// Worker threads for fetching, extraction and NLI.
    pub parallelism: usize,
    /// Links kept per NLI class.
    pub link_cap: usize,
    pub fetch_timeout_secs: f64,
    pub filter: FilterConfig,
    pub backends: BackendProfiles,
    pub server: ServerConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("data"),
            profile: Profile::Stub,
            seed: 1980,
            parallelism: 8,
            link_cap: crate::link::DEFAULT_CAP,
            fetch_timeout_secs: 20.0,
            filter: FilterConfig::default(),
            backends: BackendProfiles::default(),
            server: ServerConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn parse(toml_text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(toml_text).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read `path`; a relative `data_dir` resolves against the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.to_path_buf(), reason: e.to_string() })?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            ConfigError::Invalid(reason) => ConfigError::Read { path: path.to_path_buf(), reason },
            other => other,
        })?;
        if cfg.data_dir.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.data_dir = dir.join(&cfg.data_dir);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.filter.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.parallelism == 0 {
            return Err(ConfigError::Invalid("parallelism must be at least 1".into()));
        }
        if !self.fetch_timeout_secs.is_finite() || self.fetch_timeout_secs <= 0.0 {
            return Err(ConfigError::Invalid("fetch_timeout_secs must be positive".into()));
        }
        for (name, b) in [("embedding", &self.backends.embedding), ("nli", &self.backends.nli), ("completion", &self.backends.completion)] {
            if b.kind == BackendKind::Http && b.url.is_none() {
                return Err(ConfigError::Invalid(format!("backends.{name}: http backend requires url")));
            }
            if !b.timeout_secs.is_finite() || b.timeout_secs <= 0.0 || b.max_in_flight == 0 {
                return Err(ConfigError::Invalid(format!("backends.{name}: timeout and max_in_flight must be positive")));
            }
        }
        Ok(())
    }

    /// Backend blocks in effect for the active profile.
    pub fn effective_backends(&self) -> BackendProfiles {
        match self.profile {
            Profile::Live => self.backends.clone(),
            Profile::Stub => BackendProfiles::default(),
        }
    }

    pub fn build_backends(&self) -> Result<Backends, ConfigError> {
        let b = self.effective_backends();
        Ok(Backends {
            embedding: build_embedding(&b.embedding)?,
            nli: build_nli(&b.nli)?,
            completion: build_completion(&b.completion)?,
        })
    }
}

#[derive(Clone)]
pub struct Backends {
    pub embedding: Arc<dyn EmbeddingBackend>,
    pub nli: Arc<dyn NliBackend>,
    pub completion: Arc<dyn CompletionBackend>,
}
