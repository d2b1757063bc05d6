//! File-backed cluster documents: one JSON file per cluster holding the
//! articles and every stage output.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotate::AnnotatedArticle;
use crate::claims::Claim;
use crate::corpus::{ArticleCluster, FetchFailure};
use crate::filter::{CandidatePair, FilterConfig};
use crate::link::{ClaimLink, SentenceLink};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("invalid id {0:?}")]
    InvalidId(String),
    #[error("cluster {0} not found")]
    NotFound(String),
    #[error("cluster document {path} is corrupt: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Summary of the filter run that produced the stored candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterRun {
    pub config: FilterConfig,
    pub pairs_scored: usize,
    pub retained_before_dedup: usize,
    pub cross_article_pairs: u64,
}

/// A cluster plus whatever pipeline stages have run on it. A stage that has
/// not run is absent; a stage that ran and found nothing is an empty list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDocument {
    #[serde(flatten)]
    pub cluster: ArticleCluster,
    #[serde(default)]
    pub failures: Vec<FetchFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim_prompt_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claims: Option<Vec<Claim>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterRun>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<CandidatePair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<Vec<ClaimLink>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_links: Option<Vec<SentenceLink>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<Vec<AnnotatedArticle>>,
}

impl ClusterDocument {
    pub fn new(cluster: ArticleCluster, failures: Vec<FetchFailure>) -> Self {
        Self {
            cluster,
            failures,
            claim_prompt_version: None,
            claims: None,
            filter: None,
            candidates: None,
            link_cap: None,
            links: None,
            sentence_links: None,
            annotations: None,
        }
    }

    /// Drop claims and everything derived from them.
    pub fn clear_from_claims(&mut self) {
        self.claim_prompt_version = None;
        self.claims = None;
        self.clear_from_candidates();
    }

    pub fn clear_from_candidates(&mut self) {
        self.filter = None;
        self.candidates = None;
        self.clear_from_links();
    }

    pub fn clear_from_links(&mut self) {
        self.link_cap = None;
        self.links = None;
        self.sentence_links = None;
        self.annotations = None;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("cluster document serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub cluster_id: String,
    pub story_title: String,
    pub article_count: usize,
}

/// Ids are lowercase ASCII alphanumerics and dashes, at most 100 chars.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 100
        && !id.starts_with('-')
        && id.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

#[derive(Debug, Clone)]
pub struct ClusterStore {
    root: PathBuf,
}

impl ClusterStore {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Self { root: data_dir.into().join("clusters") }
    }

    pub fn dir(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, cluster_id: &str) -> Result<PathBuf, StoreError> {
        if !valid_id(cluster_id) {
            return Err(StoreError::InvalidId(cluster_id.to_string()));
        }
        Ok(self.root.join(format!("{cluster_id}.json")))
    }

    /// Write through a temp file and rename, so readers never see a partial document.
    pub fn save(&self, doc: &ClusterDocument) -> Result<PathBuf, StoreError> {
        let path = self.path_for(&doc.cluster.cluster_id)?;
        let io = |source| StoreError::Io { path: path.clone(), source };
        std::fs::create_dir_all(&self.root).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root).map_err(io)?;
        tmp.write_all(doc.to_json().as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
        }
        tmp.persist(&path).map_err(|e| io(e.error))?;
        Ok(path)
    }

    pub fn load(&self, cluster_id: &str) -> Result<ClusterDocument, StoreError> {
        let path = self.path_for(cluster_id)?;
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(StoreError::NotFound(cluster_id.to_string()))
            }
            Err(source) => return Err(StoreError::Io { path, source }),
        };
        let doc: ClusterDocument =
            serde_json::from_str(&text).map_err(|e| StoreError::Corrupt { path: path.clone(), reason: e.to_string() })?;
        if doc.cluster.cluster_id != cluster_id {
            return Err(StoreError::Corrupt { path, reason: format!("holds cluster {}", doc.cluster.cluster_id) });
        }
        Ok(doc)
    }

    /// Ids of stored clusters, sorted.
    pub fn ids(&self) -> Result<Vec<String>, StoreError> {
        let entries = match std::fs::read_dir(&self.root) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(source) => return Err(StoreError::Io { path: self.root.clone(), source }),
        };
        let mut ids: Vec<String> = entries
            .filter_map(Result::ok)
            .filter_map(|e| e.file_name().to_str()?.strip_suffix(".json").map(str::to_string))
            .filter(|id| valid_id(id))
            .collect();
        ids.sort();
        Ok(ids)
    }

    pub fn list(&self) -> Result<Vec<ClusterSummary>, StoreError> {
        self.ids()?
            .into_iter()
            .map(|id| {
                let doc = self.load(&id)?;
                Ok(ClusterSummary {
                    cluster_id: id,
                    story_title: doc.cluster.story_title,
                    article_count: doc.cluster.articles.len(),
                })
            })
            .collect()
    }
}
