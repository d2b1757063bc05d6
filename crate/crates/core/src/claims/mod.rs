//! Atomic claim extraction with a few-shot prompted completion model.
//!
//! Each sentence is substituted into the shipped prompt, the completion is
//! parsed for `Claim:` lines, and every claim keeps a pointer back to its
//! source sentence. When the backend fails or yields nothing parseable, the
//! sentence itself becomes a single passthrough claim.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backends::CompletionBackend;
use crate::corpus::{ArticleCluster, Sentence};

/// The few-shot claim extraction prompt, verbatim.
pub const CLAIM_PROMPT: &str = include_str!("../../assets/claim_prompt.txt");
pub const CLAIM_PROMPT_VERSION: &str = "1";
/// Placeholder replaced by the quoted sentence.
pub const SENTENCE_SLOT: &str = "<INSERT SENTENCE HERE>";
pub const MAX_CLAIM_CHARS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractionMethod {
    Llm,
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub claim_id: String,
    pub article_id: String,
    pub sentence_index: usize,
    pub text: String,
    pub extraction_method: ExtractionMethod,
}

/// Ids sort in (article, sentence, claim) order as long as article ids do.
pub fn claim_id(article_id: &str, sentence_index: usize, ordinal: usize) -> String {
    format!("{article_id}-s{sentence_index:04}-c{ordinal:02}")
}

pub fn render_prompt(sentence: &str) -> String {
    CLAIM_PROMPT.replacen(SENTENCE_SLOT, &format!("\"{}\"", sentence.trim()), 1)
}

/// Text after each `Claim:` prefix, trimmed, in order, without
/// case-insensitive duplicates. Other lines are ignored.
pub fn parse_claim_list(completion: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    completion
        .lines()
        .filter_map(|l| l.trim_start().strip_prefix("Claim:"))
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .filter(|c| seen.insert(c.to_lowercase()))
        .map(str::to_string)
        .collect()
}

/// Inverse of [`parse_claim_list`].
pub fn format_claim_list(claims: &[String]) -> String {
    claims.iter().map(|c| format!("Claim: {c}")).collect::<Vec<_>>().join("\n")
}

/// Cut to at most [`MAX_CLAIM_CHARS`] chars, backing up to a word boundary.
pub fn truncate_claim(text: &str) -> String {
    if text.chars().count() <= MAX_CLAIM_CHARS {
        return text.to_string();
    }
    let cut: String = text.chars().take(MAX_CLAIM_CHARS).collect();
    let next_is_space = text.chars().nth(MAX_CLAIM_CHARS).is_some_and(char::is_whitespace);
    let kept = if next_is_space {
        cut.as_str()
    } else {
        cut.rfind(char::is_whitespace).map_or(cut.as_str(), |i| &cut[..i])
    };
    tracing::warn!(chars = text.chars().count(), "claim longer than {MAX_CLAIM_CHARS} chars truncated");
    kept.trim_end().to_string()
}

/// Claims for one sentence. Never fails: backend errors and empty parses
/// fall back to a passthrough claim.
pub fn extract_claims(article_id: &str, sentence: &Sentence, backend: &dyn CompletionBackend) -> Vec<Claim> {
    let make = |ordinal: usize, text: &str, method| Claim {
        claim_id: claim_id(article_id, sentence.sentence_index, ordinal),
        article_id: article_id.to_string(),
        sentence_index: sentence.sentence_index,
        text: truncate_claim(text),
        extraction_method: method,
    };
    let parsed = match backend.complete(&render_prompt(&sentence.text)) {
        Ok(completion) => parse_claim_list(&completion),
        Err(e) => {
            tracing::warn!(article_id, sentence = sentence.sentence_index, error = %e, "claim extraction failed; using sentence");
            Vec::new()
        }
    };
    if parsed.is_empty() {
        return vec![make(0, &sentence.text, ExtractionMethod::Passthrough)];
    }
    parsed.iter().enumerate().map(|(i, t)| make(i, t, ExtractionMethod::Llm)).collect()
}

/// Claims for every sentence of every article, in article, sentence, claim order.
pub fn extract_cluster_claims(
    cluster: &ArticleCluster,
    backend: &dyn CompletionBackend,
    parallelism: usize,
) -> Vec<Claim> {
    let jobs: Vec<(&str, &Sentence)> = cluster
        .articles
        .iter()
        .flat_map(|a| a.sentences.iter().map(move |s| (a.article_id.as_str(), s)))
        .collect();
    let per_sentence: Vec<Vec<Claim>> =
        crate::util::in_pool(parallelism, || jobs.par_iter().map(|(aid, s)| extract_claims(aid, s, backend)).collect());
    per_sentence.into_iter().flatten().collect()
}

/// Every claim refers to an existing sentence and claim ids are unique.
pub fn validate_claims(cluster: &ArticleCluster, claims: &[Claim]) -> Result<(), String> {
    let mut ids = HashSet::new();
    for c in claims {
        if !ids.insert(c.claim_id.as_str()) {
            return Err(format!("duplicate claim id {}", c.claim_id));
        }
        if c.text.trim().is_empty() {
            return Err(format!("claim {} is empty", c.claim_id));
        }
        if cluster.sentence(&c.article_id, c.sentence_index).is_none() {
            return Err(format!("claim {} points at missing sentence", c.claim_id));
        }
    }
    Ok(())
}

pub fn index_by_id(claims: &[Claim]) -> HashMap<&str, &Claim> {
    claims.iter().map(|c| (c.claim_id.as_str(), c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::stub::{EchoCompletion, ExemplarCompletion, FailingCompletion};
    use proptest::prelude::*;

    fn sentence(text: &str) -> Sentence {
        Sentence { sentence_index: 3, span_start: 0, span_end: text.chars().count(), text: text.to_string() }
    }

    #[test]
    fn prompt_asset_is_intact() {
        assert!(CLAIM_PROMPT.starts_with("Extract all the claims from a sentence"));
        assert_eq!(CLAIM_PROMPT.matches("Sentence:").count(), 4);
        assert_eq!(CLAIM_PROMPT.matches("Claim:").count(), 10);
        assert!(CLAIM_PROMPT.trim_end().ends_with(SENTENCE_SLOT));
    }

    #[test]
    fn prompt_substitutes_only_the_slot() {
        let p = render_prompt("It rained.");
        assert!(p.trim_end().ends_with("Sentence: \"It rained.\""));
        assert!(!p.contains(SENTENCE_SLOT));
        assert_eq!(p.len(), CLAIM_PROMPT.len() - SENTENCE_SLOT.len() + "\"It rained.\"".len());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_claim_list("Claim: A.\nClaim: B."), vec!["A.", "B."]);
        assert_eq!(parse_claim_list("Claim: A.\nnoise\nClaim: A."), vec!["A."]);
        assert_eq!(parse_claim_list("Claim: Mercedes won.\nClaim: mercedes WON."), vec!["Mercedes won."]);
        assert!(parse_claim_list("").is_empty());
        assert!(parse_claim_list("Claim:   \nno claims").is_empty());
    }

    #[test]
    fn hamilton_exemplar() {
        let s = sentence(
            "Lewis Hamilton and Mercedes have once again confirmed themselves as drivers and constructors world champions.",
        );
        let claims = extract_claims("a001", &s, &ExemplarCompletion);
        let texts: Vec<_> = claims.iter().map(|c| c.text.as_str()).collect();
        assert_eq!(texts, vec![
            "Mercedes confirmed themselves as constructors world champions.",
            "Lewis Hamilton confirmed themselves as drivers world champions.",
        ]);
        assert!(claims.iter().all(|c| c.extraction_method == ExtractionMethod::Llm && c.sentence_index == 3));
        assert_eq!(claims[1].claim_id, "a001-s0003-c01");
    }

    #[test]
    fn stations_exemplar() {
        let s = sentence(
            "The 3rd and 4th stations all announced that they would be postponed, and the Monaco station was subsequently cancelled.",
        );
        let texts: Vec<_> = extract_claims("a000", &s, &ExemplarCompletion).into_iter().map(|c| c.text).collect();
        assert_eq!(texts, vec![
            "Monaco station was cancelled.",
            "4th stations announced they would be postponed.",
            "The 3rd stations announced they would be postponed.",
            "The 4th stations postponed.",
            "The 3rd stations postponed.",
        ]);
    }

    #[test]
    fn echo_and_failure_fall_back_to_passthrough() {
        let s = sentence("The bridge reopened on Tuesday.");
        for backend in [&EchoCompletion as &dyn CompletionBackend, &FailingCompletion] {
            let claims = extract_claims("a002", &s, backend);
            assert_eq!(claims.len(), 1);
            assert_eq!(claims[0].text, s.text);
            assert_eq!(claims[0].extraction_method, ExtractionMethod::Passthrough);
        }
    }

    #[test]
    fn long_claims_truncate_on_word_boundary() {
        let long = "word ".repeat(150);
        let t = truncate_claim(long.trim());
        assert!(t.chars().count() <= MAX_CLAIM_CHARS);
        assert!(t.ends_with("word"));
        let unbroken = "x".repeat(600);
        assert_eq!(truncate_claim(&unbroken).chars().count(), MAX_CLAIM_CHARS);
        assert_eq!(truncate_claim("short"), "short");
    }

    proptest! {
        #[test]
        fn parse_is_idempotent_on_its_output(lines in proptest::collection::vec("[A-Za-z :]{0,20}", 0..8)) {
            let completion = lines.iter().map(|l| format!("Claim: {l}")).collect::<Vec<_>>().join("\n");
            let once = parse_claim_list(&completion);
            let twice = parse_claim_list(&format_claim_list(&once));
            prop_assert_eq!(once, twice);
        }
    }
}
