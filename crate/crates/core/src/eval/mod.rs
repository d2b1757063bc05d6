//! Filter evaluation: how well a candidate filter keeps labelled
//! entailment/contradiction pairs while discarding random sentence pairs.

mod load;

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{cosine_similarity, BackendError, EmbeddingBackend};
use crate::filter::{lexical_overlap_score, FilterMethod};
use crate::link::NliLabel;

pub use load::{load_nli_pairs, NliExample};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{path}: {reason}")]
    Input { path: String, reason: String },
    #[error("eval set is empty")]
    Empty,
    #[error("need at least two distinct premises to sample {0} negatives")]
    TooFewPremises(usize),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gold {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub text_a: String,
    pub text_b: String,
    pub gold: Gold,
}

/// Positives are every entailment and contradiction pair; negatives pair up
/// premises of two different examples chosen uniformly with a seeded RNG.
pub fn build_eval_set_from(examples: &[NliExample], n_negatives: usize, seed: u64) -> Result<Vec<EvalPair>, EvalError> {
    let mut out: Vec<EvalPair> = examples
        .iter()
        .filter(|e| e.label != NliLabel::Neutral)
        .map(|e| EvalPair { text_a: e.premise.clone(), text_b: e.hypothesis.clone(), gold: Gold::Positive })
        .collect();
    if n_negatives == 0 {
        return Ok(out);
    }
    // Several examples often share one premise; sample among distinct texts
    // so a negative never pairs a sentence with itself.
    let mut seen = HashSet::new();
    let premises: Vec<&str> =
        examples.iter().map(|e| e.premise.as_str()).filter(|p| seen.insert(*p)).collect();
    if premises.len() < 2 {
        return Err(EvalError::TooFewPremises(n_negatives));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_negatives {
        let i = rng.random_range(0..premises.len());
        let mut j = rng.random_range(0..premises.len() - 1);
        if j >= i {
            j += 1;
        }
        out.push(EvalPair { text_a: premises[i].to_string(), text_b: premises[j].to_string(), gold: Gold::Negative });
    }
    Ok(out)
}

/// [`build_eval_set_from`] over a TSV or JSONL file of NLI pairs.
pub fn build_eval_set(path: &std::path::Path, n_negatives: usize, seed: u64) -> Result<Vec<EvalPair>, EvalError> {
    build_eval_set_from(&load_nli_pairs(path)?, n_negatives, seed)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn from_predictions(gold: &[Gold], predicted_positive: &[bool]) -> Self {
        assert_eq!(gold.len(), predicted_positive.len());
        let mut c = Confusion::default();
        for (g, p) in gold.iter().zip(predicted_positive) {
            match (g, p) {
                (Gold::Positive, true) => c.tp += 1,
                (Gold::Positive, false) => c.fn_ += 1,
                (Gold::Negative, true) => c.fp += 1,
                (Gold::Negative, false) => c.tn += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterMetrics {
    pub precision: f64,
    pub recall: f64,
    pub macro_f1: f64,
    pub tnr: f64,
    #[serde(flatten)]
    pub confusion: Confusion,
}

impl FilterMetrics {
    /// Undefined ratios are 0. Macro-F1 averages the F1 of the retain
    /// (positive) and discard (negative) classes.
    pub fn from_confusion(c: Confusion) -> Self {
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        let tnr = ratio(c.tn, c.tn + c.fp);
        let npv = ratio(c.tn, c.tn + c.fn_);
        let macro_f1 = (f1(precision, recall) + f1(npv, tnr)) / 2.0;
        Self { precision, recall, macro_f1, tnr, confusion: c }
    }
}

/// Scores a text pair the way a filter would.
pub enum PairScorer<'a> {
    Lexical,
    Embedding(&'a dyn EmbeddingBackend),
}

impl PairScorer<'_> {
    pub fn method(&self) -> FilterMethod {
        match self {
            PairScorer::Lexical => FilterMethod::LexicalOverlap,
            PairScorer::Embedding(_) => FilterMethod::EmbeddingSimilarity,
        }
    }

    /// One score per pair. Embeddings are computed once per distinct text.
    pub fn score_all(&self, pairs: &[EvalPair]) -> Result<Vec<f64>, EvalError> {
        match self {
            PairScorer::Lexical => Ok(pairs.par_iter().map(|p| lexical_overlap_score(&p.text_a, &p.text_b)).collect()),
            PairScorer::Embedding(backend) => {
                let mut index: HashMap<&str, usize> = HashMap::new();
                let mut texts: Vec<String> = Vec::new();
                for p in pairs {
                    for t in [&p.text_a, &p.text_b] {
                        index.entry(t.as_str()).or_insert_with(|| {
                            texts.push(t.clone());
                            texts.len() - 1
                        });
                    }
                }
                let vectors = backend.embed(&texts)?;
                if vectors.len() != texts.len() {
                    return Err(BackendError::Malformed(format!("{} vectors for {} texts", vectors.len(), texts.len())).into());
                }
                Ok(pairs
                    .par_iter()
                    .map(|p| cosine_similarity(&vectors[index[p.text_a.as_str()]], &vectors[index[p.text_b.as_str()]]))
                    .collect())
            }
        }
    }
}

/// Metrics for scores already computed: a pair is predicted positive iff its
/// score is at least `threshold`.
pub fn metrics_at(pairs: &[EvalPair], scores: &[f64], threshold: f64) -> FilterMetrics {
    let gold: Vec<Gold> = pairs.iter().map(|p| p.gold).collect();
    let predicted: Vec<bool> = scores.iter().map(|s| *s >= threshold).collect();
    FilterMetrics::from_confusion(Confusion::from_predictions(&gold, &predicted))
}

pub fn evaluate_filter(scorer: &PairScorer<'_>, threshold: f64, pairs: &[EvalPair]) -> Result<FilterMetrics, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(metrics_at(pairs, &scorer.score_all(pairs)?, threshold))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: FilterMethod,
    pub threshold: f64,
    pub positives: usize,
    pub negatives: usize,
    pub seed: u64,
    pub metrics: FilterMetrics,
}

impl EvalReport {
    pub fn table(&self) -> String {
        let m = &self.metrics;
        let c = &m.confusion;
        format!(
            "method     {} (threshold {})\npairs      {} positive, {} negative\n\
             precision  {:.4}\nrecall     {:.4}\nmacro-F1   {:.4}\nTNR        {:.4}\n\
             confusion  tp={} fp={} tn={} fn={}\n",
            self.method.short_name(),
            self.threshold,
            self.positives,
            self.negatives,
            m.precision,
            m.recall,
            m.macro_f1,
            m.tnr,
            c.tp,
            c.fp,
            c.tn,
            c.fn_
        )
    }
}
