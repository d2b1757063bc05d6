//! Deterministic in-process backends used by the default profile and by tests.

use std::collections::HashMap;

use super::{BackendError, CompletionBackend, EmbeddingBackend, NliBackend, NliProbabilities};
use crate::filter::tokens;
use crate::util::fnv1a64;

pub const STUB_DIMENSION: usize = 256;

/// Feature-hashed bag of stemmed content words, L2-normalized.
///
/// Texts with the same multiset of stemmed non-stopword tokens embed to the
/// same vector. A text with no content words hashes a single sentinel feature
/// so the vector is never zero.
#[derive(Debug, Clone)]
pub struct HashingEmbedder {
    dimension: usize,
}

impl HashingEmbedder {
    pub fn new(dimension: usize) -> Self {
        assert!(dimension > 0, "embedding dimension must be positive");
        Self { dimension }
    }

    pub fn embed_one(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dimension];
        let terms = tokens::content_terms(text);
        if terms.is_empty() {
            v[(fnv1a64(b"\0empty") % self.dimension as u64) as usize] = 1.0;
            return v;
        }
        for t in &terms {
            v[(fnv1a64(t.as_bytes()) % self.dimension as u64) as usize] += 1.0;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        v
    }
}

impl Default for HashingEmbedder {
    fn default() -> Self {
        Self::new(STUB_DIMENSION)
    }
}

impl EmbeddingBackend for HashingEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
        Ok(texts.iter().map(|t| self.embed_one(t)).collect())
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn normalized(&self) -> bool {
        true
    }
}

fn is_negation(word: &str) -> bool {
    matches!(word, "not" | "no" | "never" | "cannot" | "n't") || word.ends_with("n't")
}

/// Negation count and sorted stemmed content terms.
fn rule_signature(text: &str) -> (usize, Vec<String>) {
    let mut negations = 0;
    let mut content = Vec::new();
    for w in tokens::words(text) {
        if is_negation(&w) {
            negations += 1;
        } else if !tokens::is_stopword(&w) {
            content.push(crate::filter::porter::stem(&w));
        }
    }
    content.sort();
    (negations, content)
}

/// Rule-based NLI for offline runs.
///
/// Two texts with the same stemmed content words (order, case, punctuation
/// and stopwords ignored) are an entailment when they carry the same number
/// of negations, and a contradiction when exactly one negation was inserted
/// or removed. Everything else is neutral. All verdicts are certain.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleNli;

impl NliBackend for RuleNli {
    fn classify(&self, premise: &str, hypothesis: &str) -> Result<NliProbabilities, BackendError> {
        let (neg_p, content_p) = rule_signature(premise);
        let (neg_h, content_h) = rule_signature(hypothesis);
        if content_p.is_empty() || content_p != content_h {
            return Ok(NliProbabilities::certain_neutral());
        }
        Ok(match neg_p.abs_diff(neg_h) {
            0 => NliProbabilities::certain_entailment(),
            1 => NliProbabilities::certain_contradiction(),
            _ => NliProbabilities::certain_neutral(),
        })
    }
}

/// Table-driven NLI: fixed probabilities per ordered (premise, hypothesis),
/// neutral for anything not in the table. Directions are independent.
#[derive(Debug, Clone, Default)]
pub struct ScriptedNli {
    table: HashMap<(String, String), NliProbabilities>,
    failing: Vec<(String, String)>,
}

impl ScriptedNli {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, premise: &str, hypothesis: &str, probs: NliProbabilities) -> Self {
        self.insert(premise, hypothesis, probs);
        self
    }

    pub fn insert(&mut self, premise: &str, hypothesis: &str, probs: NliProbabilities) {
        self.table.insert((premise.to_string(), hypothesis.to_string()), probs);
    }

    /// Make this ordered pair fail with a transport error.
    pub fn fail_on(mut self, premise: &str, hypothesis: &str) -> Self {
        self.failing.push((premise.to_string(), hypothesis.to_string()));
        self
    }
}

impl NliBackend for ScriptedNli {
    fn classify(&self, premise: &str, hypothesis: &str) -> Result<NliProbabilities, BackendError> {
        if self.failing.iter().any(|(p, h)| p == premise && h == hypothesis) {
            return Err(BackendError::Transport("scripted failure".into()));
        }
        Ok(self
            .table
            .get(&(premise.to_string(), hypothesis.to_string()))
            .copied()
            .unwrap_or_else(NliProbabilities::certain_neutral))
    }
}

/// The sentence in the last `Sentence:` slot of a claim prompt, unquoted.
pub(crate) fn final_sentence_slot(prompt: &str) -> Option<&str> {
    prompt
        .lines()
        .rev()
        .find_map(|l| l.trim_start().strip_prefix("Sentence:"))
        .map(unquote)
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('"').and_then(|r| r.strip_suffix('"')).unwrap_or(s)
}

/// Echoes the sentence it was asked about, so no claim lines are produced
/// and extraction falls back to one passthrough claim per sentence.
#[derive(Debug, Clone, Copy, Default)]
pub struct EchoCompletion;

impl CompletionBackend for EchoCompletion {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        Ok(final_sentence_slot(prompt).unwrap_or(prompt).to_string())
    }
}

/// Replays the few-shot answers embedded in the prompt itself: when the
/// queried sentence is one of the worked examples, its claim lines are
/// returned verbatim; otherwise behaves like [`EchoCompletion`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ExemplarCompletion;

impl ExemplarCompletion {
    fn exemplars(prompt: &str) -> Vec<(&str, Vec<&str>)> {
        let mut out: Vec<(&str, Vec<&str>)> = Vec::new();
        for line in prompt.lines() {
            let line = line.trim();
            if let Some(s) = line.strip_prefix("Sentence:") {
                out.push((unquote(s), Vec::new()));
            } else if line.starts_with("Claim:") {
                if let Some((_, claims)) = out.last_mut() {
                    claims.push(line);
                }
            }
        }
        out
    }
}

impl CompletionBackend for ExemplarCompletion {
    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        let mut blocks = Self::exemplars(prompt);
        let Some((query, _)) = blocks.pop() else {
            return Ok(prompt.to_string());
        };
        match blocks.into_iter().find(|(s, _)| *s == query) {
            Some((_, claims)) => Ok(claims.join("\n")),
            None => Ok(query.to_string()),
        }
    }
}

/// Always fails; exercises fallback paths.
#[derive(Debug, Clone, Copy, Default)]
pub struct FailingCompletion;

impl CompletionBackend for FailingCompletion {
    fn complete(&self, _prompt: &str) -> Result<String, BackendError> {
        Err(BackendError::Timeout { attempts: 1 })
    }
}
