//! Article clusters: ingestion from a manifest, body extraction and sentence segmentation.

mod extract;
mod fetch;
mod segment;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_body, looks_like_html, ExtractedDocument};
pub use fetch::{fetch_cluster, FetchFailure, FetchOptions, FetchOutcome, Manifest};
pub use segment::segment_sentences;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("document has no extractable paragraph text")]
    EmptyDocument,
    #[error("malformed manifest: {0}")]
    MalformedManifest(String),
    #[error("network unreachable: every URL failed to connect ({0} failure(s))")]
    NetworkUnreachable(usize),
    #[error("all {} article(s) failed: {}", .0.len(), summarize(.0))]
    AllArticlesFailed(Vec<FetchFailure>),
    #[error("invalid cluster: {0}")]
    Invalid(String),
}

fn summarize(failures: &[FetchFailure]) -> String {
    failures.iter().map(|f| format!("{} ({})", f.source, f.reason)).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub sentence_index: usize,
    /// Char offset into the article body, inclusive.
    pub span_start: usize,
    /// Char offset into the article body, exclusive.
    pub span_end: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub article_id: String,
    pub url: String,
    pub venue: String,
    pub title: String,
    pub body: String,
    pub sentences: Vec<Sentence>,
}

impl Article {
    pub fn sentence(&self, index: usize) -> Option<&Sentence> {
        self.sentences.get(index)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let len = self.body.chars().count();
        let mut prev_end = 0;
        for (i, s) in self.sentences.iter().enumerate() {
            let bad = |why: &str| CorpusError::Invalid(format!("{} sentence {i}: {why}", self.article_id));
            if s.sentence_index != i {
                return Err(bad("index out of order"));
            }
            if s.span_start >= s.span_end || s.span_end > len {
                return Err(bad("span out of range"));
            }
            if i > 0 && s.span_start < prev_end {
                return Err(bad("overlaps previous sentence"));
            }
            if char_slice(&self.body, s.span_start, s.span_end) != s.text {
                return Err(bad("text differs from body span"));
            }
            if s.text.trim().is_empty() {
                return Err(bad("blank text"));
            }
            prev_end = s.span_end;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleCluster {
    pub cluster_id: String,
    pub story_title: String,
    pub articles: Vec<Article>,
    pub created_at: DateTime<Utc>,
}

impl ArticleCluster {
    pub fn article(&self, article_id: &str) -> Option<&Article> {
        self.articles.iter().find(|a| a.article_id == article_id)
    }

    pub fn sentence(&self, article_id: &str, index: usize) -> Option<&Sentence> {
        self.article(article_id)?.sentence(index)
    }

    pub fn sentence_count(&self) -> usize {
        self.articles.iter().map(|a| a.sentences.len()).sum()
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.articles.is_empty() {
            return Err(CorpusError::Invalid("cluster has no articles".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for a in &self.articles {
            if !seen.insert(a.article_id.as_str()) {
                return Err(CorpusError::Invalid(format!("duplicate article id {}", a.article_id)));
            }
            a.validate()?;
        }
        Ok(())
    }
}

/// Substring of `s` by char offsets `[start, end)`.
pub fn char_slice(s: &str, start: usize, end: usize) -> &str {
    let mut idx = s.char_indices().map(|(i, _)| i).chain(std::iter::once(s.len()));
    let from = idx.nth(start).unwrap_or(s.len());
    let to = if end > start { idx.nth(end - start - 1).unwrap_or(s.len()) } else { from };
    &s[from..to]
}

/// Build an article from raw HTML or text. Returns `None` (with a warning)
/// when no sentence survives segmentation.
pub fn build_article(
    article_id: &str,
    url: &str,
    fallback_venue: &str,
    raw: &str,
) -> Result<Option<Article>, CorpusError> {
    let doc = extract_body(raw)?;
    let sentences = segment_sentences(&doc.body);
    if sentences.is_empty() {
        tracing::warn!(article_id, url, "article has no sentences; dropped");
        return Ok(None);
    }
    Ok(Some(Article {
        article_id: article_id.to_string(),
        url: url.to_string(),
        venue: doc.site_name.unwrap_or_else(|| fallback_venue.to_string()),
        title: doc.title,
        body: doc.body,
        sentences,
    }))
}
