//! Per-article highlights with cross-source evidence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ArticleCluster;
use crate::link::{NliLabel, SentenceLink};

#[derive(Debug, Error)]
pub enum AnnotateError {
    #[error("unknown article {0}")]
    UnknownArticle(String),
    #[error("sentence link refers to missing sentence {0}:{1}")]
    DanglingSentence(String, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Supported,
    Contradicted,
    Mixed,
}

impl Polarity {
    /// `None` for an empty label list.
    pub fn of(labels: impl IntoIterator<Item = NliLabel>) -> Option<Self> {
        let (mut ent, mut con, mut any) = (false, false, false);
        for l in labels {
            any = true;
            match l {
                NliLabel::Entailment => ent = true,
                NliLabel::Contradiction => con = true,
                NliLabel::Neutral => {}
            }
        }
        any.then_some(match (ent, con) {
            (true, false) => Polarity::Supported,
            (false, true) => Polarity::Contradicted,
            _ => Polarity::Mixed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceSnippet {
    pub label: NliLabel,
    pub confidence: f64,
    pub source_article_id: String,
    pub source_venue: String,
    pub source_title: String,
    pub source_url: String,
    pub snippet_text: String,
    pub source_sentence_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Highlight {
    pub sentence_index: usize,
    pub span_start: usize,
    pub span_end: usize,
    pub polarity: Polarity,
    pub evidence: Vec<EvidenceSnippet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedArticle {
    pub cluster_id: String,
    pub article_id: String,
    pub url: String,
    pub venue: String,
    pub title: String,
    pub body: String,
    pub highlights: Vec<Highlight>,
}

/// Highlights for `focus_article_id`: one per sentence touched by a link,
/// evidence sorted by confidence (then source position, then label).
pub fn annotate_article(
    cluster: &ArticleCluster,
    sentence_links: &[SentenceLink],
    focus_article_id: &str,
) -> Result<AnnotatedArticle, AnnotateError> {
    let focus = cluster
        .article(focus_article_id)
        .ok_or_else(|| AnnotateError::UnknownArticle(focus_article_id.to_string()))?;

    let mut per_sentence: BTreeMap<usize, Vec<EvidenceSnippet>> = BTreeMap::new();
    for link in sentence_links.iter().filter_map(|l| l.oriented(focus_article_id)) {
        let missing = |r: &crate::link::SentenceRef| AnnotateError::DanglingSentence(r.article_id.clone(), r.sentence_index);
        if focus.sentence(link.focus.sentence_index).is_none() {
            return Err(missing(&link.focus));
        }
        let source = cluster.article(&link.evidence.article_id).ok_or_else(|| missing(&link.evidence))?;
        let sentence = source.sentence(link.evidence.sentence_index).ok_or_else(|| missing(&link.evidence))?;
        per_sentence.entry(link.focus.sentence_index).or_default().push(EvidenceSnippet {
            label: link.label,
            confidence: link.confidence,
            source_article_id: source.article_id.clone(),
            source_venue: source.venue.clone(),
            source_title: source.title.clone(),
            source_url: source.url.clone(),
            snippet_text: sentence.text.clone(),
            source_sentence_index: sentence.sentence_index,
        });
    }

    let highlights = per_sentence
        .into_iter()
        .filter_map(|(idx, mut evidence)| {
            evidence.sort_by(|a, b| {
                b.confidence
                    .total_cmp(&a.confidence)
                    .then_with(|| a.source_article_id.cmp(&b.source_article_id))
                    .then(a.source_sentence_index.cmp(&b.source_sentence_index))
                    .then(a.label.cmp(&b.label))
            });
            let polarity = Polarity::of(evidence.iter().map(|e| e.label))?;
            let s = focus.sentence(idx)?;
            Some(Highlight { sentence_index: idx, span_start: s.span_start, span_end: s.span_end, polarity, evidence })
        })
        .collect();

    Ok(AnnotatedArticle {
        cluster_id: cluster.cluster_id.clone(),
        article_id: focus.article_id.clone(),
        url: focus.url.clone(),
        venue: focus.venue.clone(),
        title: focus.title.clone(),
        body: focus.body.clone(),
        highlights,
    })
}

/// Annotations with every article of the cluster as focus, in article order.
pub fn annotate_cluster(cluster: &ArticleCluster, sentence_links: &[SentenceLink]) -> Result<Vec<AnnotatedArticle>, AnnotateError> {
    cluster.articles.iter().map(|a| annotate_article(cluster, sentence_links, &a.article_id)).collect()
}
