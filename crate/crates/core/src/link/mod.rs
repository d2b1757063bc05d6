//! NLI classification of candidate pairs and projection onto sentences.
//!
//! Every candidate pair is classified in both directions. The more confident
//! non-neutral verdict becomes a [`ClaimLink`]; then each class keeps only
//! its `cap` most confident links. Claim links are finally mapped back to the
//! sentences their claims came from.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{BackendError, NliBackend, NliProbabilities};
use crate::claims::Claim;
use crate::filter::CandidatePair;

pub const DEFAULT_CAP: usize = 100;

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("empty {0} text")]
    EmptyText(&'static str),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("link refers to unknown claim {0}")]
    DanglingClaim(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NliLabel {
    Entailment,
    Contradiction,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NliVerdict {
    pub label: NliLabel,
    pub probabilities: NliProbabilities,
}

impl NliVerdict {
    /// Argmax label. Ties go to neutral first, then entailment, so an
    /// ambiguous pair never becomes a link.
    pub fn from_probs(p: NliProbabilities) -> Self {
        let mut label = NliLabel::Neutral;
        let mut best = p.neutral;
        for (l, v) in [(NliLabel::Entailment, p.entailment), (NliLabel::Contradiction, p.contradiction)] {
            if v > best {
                label = l;
                best = v;
            }
        }
        Self { label, probabilities: p }
    }

    pub fn confidence(&self) -> f64 {
        match self.label {
            NliLabel::Entailment => self.probabilities.entailment,
            NliLabel::Contradiction => self.probabilities.contradiction,
            NliLabel::Neutral => self.probabilities.neutral,
        }
    }
}

pub fn classify_pair(premise: &str, hypothesis: &str, backend: &dyn NliBackend) -> Result<NliVerdict, LinkError> {
    if premise.trim().is_empty() {
        return Err(LinkError::EmptyText("premise"));
    }
    if hypothesis.trim().is_empty() {
        return Err(LinkError::EmptyText("hypothesis"));
    }
    let p = backend.classify(premise, hypothesis)?;
    p.validate()?;
    Ok(NliVerdict::from_probs(p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimLink {
    pub premise_claim: String,
    pub hypothesis_claim: String,
    pub label: NliLabel,
    pub confidence: f64,
}

impl ClaimLink {
    /// The claim ids as an ordered pair, smaller first.
    pub fn pair_key(&self) -> (&str, &str) {
        let (p, h) = (self.premise_claim.as_str(), self.hypothesis_claim.as_str());
        if p <= h {
            (p, h)
        } else {
            (h, p)
        }
    }
}

/// Keep the `cap` most confident links of each class, ties by claim-id pair.
/// Output is ordered by label, then confidence descending, then pair.
pub fn select_top_links(mut links: Vec<ClaimLink>, cap: usize) -> Vec<ClaimLink> {
    links.retain(|l| l.label != NliLabel::Neutral);
    links.sort_by(|a, b| {
        a.label
            .cmp(&b.label)
            .then(b.confidence.total_cmp(&a.confidence))
            .then_with(|| a.pair_key().cmp(&b.pair_key()))
    });
    let mut per_class: HashMap<NliLabel, usize> = HashMap::new();
    links.retain(|l| {
        let n = per_class.entry(l.label).or_default();
        *n += 1;
        *n <= cap
    });
    links
}

/// Classify each candidate in both directions and keep the top `cap` links per class.
///
/// Failed backend calls are logged and skipped; a pair is dropped only when
/// both directions fail. When both directions are equally confident the
/// direction from the smaller claim id wins.
pub fn link_candidates(
    candidates: &[CandidatePair],
    claims: &[Claim],
    backend: &dyn NliBackend,
    cap: usize,
    parallelism: usize,
) -> Vec<ClaimLink> {
    let by_id: HashMap<&str, &Claim> = claims.iter().map(|c| (c.claim_id.as_str(), c)).collect();
    let mut pairs: Vec<(&str, &str)> = candidates
        .iter()
        .map(|c| {
            let (a, b) = (c.claim_a.as_str(), c.claim_b.as_str());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let links: Vec<ClaimLink> = crate::util::in_pool(parallelism, || {
        pairs
            .par_iter()
            .filter_map(|&(a, b)| {
                let (Some(ca), Some(cb)) = (by_id.get(a), by_id.get(b)) else {
                    tracing::warn!(a, b, "candidate refers to unknown claim; skipped");
                    return None;
                };
                if ca.article_id == cb.article_id {
                    tracing::warn!(a, b, "same-article candidate skipped");
                    return None;
                }
                let mut best: Option<ClaimLink> = None;
                for (p, h) in [(*ca, *cb), (*cb, *ca)] {
                    let verdict = match classify_pair(&p.text, &h.text, backend) {
                        Ok(v) => v,
                        Err(e) => {
                            tracing::warn!(premise = %p.claim_id, hypothesis = %h.claim_id, error = %e, "NLI call failed; direction skipped");
                            continue;
                        }
                    };
                    if verdict.label == NliLabel::Neutral {
                        continue;
                    }
                    if best.as_ref().is_none_or(|cur| verdict.confidence() > cur.confidence) {
                        best = Some(ClaimLink {
                            premise_claim: p.claim_id.clone(),
                            hypothesis_claim: h.claim_id.clone(),
                            label: verdict.label,
                            confidence: verdict.confidence(),
                        });
                    }
                }
                best
            })
            .collect()
    });
    select_top_links(links, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentenceRef {
    pub article_id: String,
    pub sentence_index: usize,
}

/// A link between two sentences, stored with `focus < evidence`. Either end
/// can serve as the focus when annotating; see [`SentenceLink::oriented`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceLink {
    pub focus: SentenceRef,
    pub evidence: SentenceRef,
    pub label: NliLabel,
    pub confidence: f64,
    pub focus_claim_text: String,
    pub evidence_claim_text: String,
}

impl SentenceLink {
    /// This link seen from `article_id`, or `None` if it does not touch that article.
    pub fn oriented(&self, article_id: &str) -> Option<SentenceLink> {
        if self.focus.article_id == article_id {
            Some(self.clone())
        } else if self.evidence.article_id == article_id {
            Some(SentenceLink {
                focus: self.evidence.clone(),
                evidence: self.focus.clone(),
                label: self.label,
                confidence: self.confidence,
                focus_claim_text: self.evidence_claim_text.clone(),
                evidence_claim_text: self.focus_claim_text.clone(),
            })
        } else {
            None
        }
    }
}

/// Map claim links onto sentence pairs, keeping the most confident link per
/// (sentence pair, label). Output sorted by (focus, evidence, label).
pub fn project_links(links: &[ClaimLink], claims: &[Claim]) -> Result<Vec<SentenceLink>, LinkError> {
    let by_id: HashMap<&str, &Claim> = claims.iter().map(|c| (c.claim_id.as_str(), c)).collect();
    let resolve = |id: &str| by_id.get(id).copied().ok_or_else(|| LinkError::DanglingClaim(id.to_string()));
    let as_ref = |c: &Claim| SentenceRef { article_id: c.article_id.clone(), sentence_index: c.sentence_index };

    type Key = (SentenceRef, SentenceRef, NliLabel);
    let mut best: BTreeMap<Key, (SentenceLink, (String, String))> = BTreeMap::new();
    for l in links {
        let (mut x, mut y) = (resolve(&l.premise_claim)?, resolve(&l.hypothesis_claim)?);
        if as_ref(x) > as_ref(y) {
            std::mem::swap(&mut x, &mut y);
        }
        let link = SentenceLink {
            focus: as_ref(x),
            evidence: as_ref(y),
            label: l.label,
            confidence: l.confidence,
            focus_claim_text: x.text.clone(),
            evidence_claim_text: y.text.clone(),
        };
        let tie = (x.claim_id.clone(), y.claim_id.clone());
        let key = (link.focus.clone(), link.evidence.clone(), link.label);
        match best.get(&key) {
            Some((cur, cur_tie))
                if cur.confidence > link.confidence || (cur.confidence == link.confidence && *cur_tie <= tie) => {}
            _ => {
                best.insert(key, (link, tie));
            }
        }
    }
    Ok(best.into_values().map(|(l, _)| l).collect())
}
