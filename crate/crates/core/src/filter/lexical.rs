use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{ordered_pair, tokens, CandidatePair, FilterConfig, FilterMethod, FilterOutcome};
use crate::claims::Claim;

/// Jaccard index of the stemmed, stopword-free token sets of `a` and `b`.
/// Zero when both sets are empty.
pub fn lexical_overlap_score(a: &str, b: &str) -> f64 {
    let sa = tokens::term_set(a);
    let sb = tokens::term_set(b);
    let inter = sa.intersection(&sb).count();
    let union = sa.len() + sb.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Intersection size of two sorted, deduplicated id lists.
fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Cross-article pairs with Jaccard overlap `>= cfg.jaccard_threshold`.
///
/// Only pairs sharing at least one term are scored, so a pair with no overlap
/// is never retained, even at a threshold of 0.
pub fn lexical_filter(claims: &[Claim], cfg: &FilterConfig) -> FilterOutcome {
    let mut vocab: HashMap<String, u32> = HashMap::new();
    let term_ids: Vec<Vec<u32>> = claims
        .iter()
        .map(|c| {
            let mut ids: Vec<u32> = tokens::term_set(&c.text)
                .into_iter()
                .map(|t| {
                    let next = vocab.len() as u32;
                    *vocab.entry(t).or_insert(next)
                })
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect();

    let mut postings: Vec<Vec<usize>> = vec![Vec::new(); vocab.len()];
    for (ci, ids) in term_ids.iter().enumerate() {
        for &t in ids {
            postings[t as usize].push(ci);
        }
    }

    let per_claim: Vec<(usize, Vec<(usize, f64)>)> = (0..claims.len())
        .into_par_iter()
        .map(|i| {
            let mut partners: Vec<usize> = term_ids[i]
                .iter()
                .flat_map(|&t| postings[t as usize].iter().copied())
                .filter(|&j| j > i && claims[j].article_id != claims[i].article_id)
                .collect();
            partners.sort_unstable();
            partners.dedup();
            let scored = partners.len();
            let kept = partners
                .into_iter()
                .filter_map(|j| {
                    let inter = sorted_intersection(&term_ids[i], &term_ids[j]);
                    let union = term_ids[i].len() + term_ids[j].len() - inter;
                    let score = inter as f64 / union as f64;
                    (score >= cfg.jaccard_threshold).then_some((j, score))
                })
                .collect();
            (scored, kept)
        })
        .collect();

    let mut pairs_scored = 0;
    let mut out: BTreeMap<(String, String), f64> = BTreeMap::new();
    for (i, (scored, kept)) in per_claim.into_iter().enumerate() {
        pairs_scored += scored;
        for (j, score) in kept {
            out.insert(ordered_pair(&claims[i].claim_id, &claims[j].claim_id), score);
        }
    }
    let retained_before_dedup = out.len();
    FilterOutcome {
        candidates: out
            .into_iter()
            .map(|((claim_a, claim_b), score)| CandidatePair {
                claim_a,
                claim_b,
                score,
                method: FilterMethod::LexicalOverlap,
            })
            .collect(),
        retained_before_dedup,
        pairs_scored,
    }
}
