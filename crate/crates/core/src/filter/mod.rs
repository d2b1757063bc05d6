//! Candidate-pair filtering.
//!
//! Comparing every claim against every other claim in a 50-article cluster
//! means over a million NLI calls. The filters here keep only cross-article
//! pairs that plausibly talk about the same thing:
//!
//! - [`embed_filter`]: each claim keeps its `top_k` most similar claims from
//!   other articles, then pairs below `cosine_threshold` are dropped.
//! - [`lexical_filter`]: pairs whose stemmed, stopword-free token sets have a
//!   Jaccard index of at least `jaccard_threshold`. An inverted index means
//!   token-disjoint pairs are never scored.
//!
//! Pairs are unordered and stored with `claim_a < claim_b`.

mod embedding;
mod lexical;
pub mod porter;
pub mod tokens;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::BackendError;

pub use embedding::embed_filter;
pub use lexical::{lexical_filter, lexical_overlap_score};
pub use porter::stem;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid filter config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMethod {
    #[default]
    EmbeddingSimilarity,
    LexicalOverlap,
}

impl FilterMethod {
    pub fn short_name(self) -> &'static str {
        match self {
            FilterMethod::EmbeddingSimilarity => "es",
            FilterMethod::LexicalOverlap => "leo",
        }
    }
}

impl std::str::FromStr for FilterMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "es" | "embedding_similarity" => Ok(Self::EmbeddingSimilarity),
            "leo" | "lexical_overlap" => Ok(Self::LexicalOverlap),
            other => Err(format!("unknown filter method {other:?} (expected es or leo)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    pub method: FilterMethod,
    pub cosine_threshold: f64,
    pub top_k: usize,
    pub jaccard_threshold: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self { method: FilterMethod::EmbeddingSimilarity, cosine_threshold: 0.3, top_k: 16, jaccard_threshold: 0.1 }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        for (name, v) in [("cosine_threshold", self.cosine_threshold), ("jaccard_threshold", self.jaccard_threshold)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(FilterError::Config(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        if self.top_k == 0 {
            return Err(FilterError::Config("top_k must be at least 1".into()));
        }
        Ok(())
    }

    /// The threshold the configured method compares against.
    pub fn threshold(&self) -> f64 {
        match self.method {
            FilterMethod::EmbeddingSimilarity => self.cosine_threshold,
            FilterMethod::LexicalOverlap => self.jaccard_threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub claim_a: String,
    pub claim_b: String,
    pub score: f64,
    pub method: FilterMethod,
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    /// Deduplicated, sorted by `(claim_a, claim_b)`.
    pub candidates: Vec<CandidatePair>,
    /// Retained pairs before deduplication of `(a, b)` / `(b, a)`.
    pub retained_before_dedup: usize,
    /// Pair scores actually computed.
    pub pairs_scored: usize,
}

/// Number of unordered claim pairs whose claims come from different articles.
pub fn cross_article_pair_count<'a>(article_ids: impl IntoIterator<Item = &'a str>) -> u64 {
    let mut per_article = std::collections::HashMap::new();
    let mut n: u64 = 0;
    for a in article_ids {
        *per_article.entry(a).or_insert(0u64) += 1;
        n += 1;
    }
    let same: u64 = per_article.values().map(|c| c * (c - 1) / 2).sum();
    n * n.saturating_sub(1) / 2 - same
}

/// Run whichever filter `cfg.method` selects.
pub fn run_filter(
    claims: &[crate::claims::Claim],
    embedder: &dyn crate::backends::EmbeddingBackend,
    cfg: &FilterConfig,
) -> Result<FilterOutcome, FilterError> {
    cfg.validate()?;
    match cfg.method {
        FilterMethod::EmbeddingSimilarity => embed_filter(claims, embedder, cfg),
        FilterMethod::LexicalOverlap => Ok(lexical_filter(claims, cfg)),
    }
}

fn ordered_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(FilterConfig::default().validate().is_ok());
        assert!(FilterConfig { top_k: 0, ..Default::default() }.validate().is_err());
        assert!(FilterConfig { cosine_threshold: 1.5, ..Default::default() }.validate().is_err());
        assert!(FilterConfig { jaccard_threshold: -0.1, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn method_names_parse() {
        assert_eq!("es".parse::<FilterMethod>().unwrap(), FilterMethod::EmbeddingSimilarity);
        assert_eq!("lexical_overlap".parse::<FilterMethod>().unwrap(), FilterMethod::LexicalOverlap);
        assert!("x".parse::<FilterMethod>().is_err());
    }

    #[test]
    fn cross_article_count() {
        // 3 articles x 2 claims: C(6,2) - 3 = 12.
        let ids = ["a", "a", "b", "b", "c", "c"];
        assert_eq!(cross_article_pair_count(ids), 12);
        let big: Vec<String> = (0..50).flat_map(|a| std::iter::repeat_n(format!("a{a}"), 30)).collect();
        assert_eq!(cross_article_pair_count(big.iter().map(String::as_str)), 1_102_500);
    }
}
