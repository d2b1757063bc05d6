use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{ordered_pair, CandidatePair, FilterConfig, FilterError, FilterMethod, FilterOutcome};
use crate::backends::{cosine_similarity, dot, EmbeddingBackend};
use crate::claims::Claim;

/// Score desc, then claim id asc. NaN sorts last.
fn rank(a: &(f64, usize), b: &(f64, usize), claims: &[Claim]) -> Ordering {
    let (sa, sb) = (if a.0.is_nan() { f64::NEG_INFINITY } else { a.0 }, if b.0.is_nan() { f64::NEG_INFINITY } else { b.0 });
    sb.total_cmp(&sa).then_with(|| claims[a.1].claim_id.cmp(&claims[b.1].claim_id))
}

/// Top-k cross-article neighbours per claim, kept when cosine `>= cosine_threshold`.
///
/// A pair survives when either claim ranks the other in its top k. The score
/// of a pair is the same from both sides, so deduplication never has to pick.
pub fn embed_filter(claims: &[Claim], backend: &dyn EmbeddingBackend, cfg: &FilterConfig) -> Result<FilterOutcome, FilterError> {
    cfg.validate()?;
    if claims.len() < 2 {
        return Ok(FilterOutcome::default());
    }
    let texts: Vec<String> = claims.iter().map(|c| c.text.clone()).collect();
    let vectors = backend.embed(&texts)?;
    let expected = backend.dimension();
    if vectors.len() != claims.len() {
        return Err(FilterError::Config(format!("backend returned {} vectors for {} texts", vectors.len(), claims.len())));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != expected) {
        return Err(FilterError::DimensionMismatch { expected, got: v.len() });
    }
    let normalized = backend.normalized();
    let score = |i: usize, j: usize| {
        if normalized {
            dot(&vectors[i], &vectors[j]).clamp(-1.0, 1.0)
        } else {
            cosine_similarity(&vectors[i], &vectors[j])
        }
    };

    let k = cfg.top_k;
    let per_claim: Vec<(usize, Vec<(f64, usize)>)> = (0..claims.len())
        .into_par_iter()
        .map(|i| {
            let mut scored: Vec<(f64, usize)> = (0..claims.len())
                .filter(|&j| claims[j].article_id != claims[i].article_id)
                .map(|j| (score(i, j), j))
                .collect();
            let n = scored.len();
            if scored.len() > k {
                scored.select_nth_unstable_by(k - 1, |a, b| rank(a, b, claims));
                scored.truncate(k);
            }
            scored.retain(|(s, _)| *s >= cfg.cosine_threshold);
            (n, scored)
        })
        .collect();

    let mut pairs_scored = 0;
    let mut retained_before_dedup = 0;
    let mut out: BTreeMap<(String, String), f64> = BTreeMap::new();
    for (i, (n, kept)) in per_claim.into_iter().enumerate() {
        pairs_scored += n;
        retained_before_dedup += kept.len();
        for (s, j) in kept {
            out.insert(ordered_pair(&claims[i].claim_id, &claims[j].claim_id), s);
        }
    }
    Ok(FilterOutcome {
        candidates: out
            .into_iter()
            .map(|((claim_a, claim_b), score)| CandidatePair {
                claim_a,
                claim_b,
                score,
                method: FilterMethod::EmbeddingSimilarity,
            })
            .collect(),
        retained_before_dedup,
        pairs_scored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::stub::HashingEmbedder;
    use crate::backends::BackendError;
    use crate::claims::ExtractionMethod;

    fn claim(id: &str, article: &str, text: &str) -> Claim {
        Claim {
            claim_id: id.into(),
            article_id: article.into(),
            sentence_index: 0,
            text: text.into(),
            extraction_method: ExtractionMethod::Passthrough,
        }
    }

    /// Fixed vectors keyed by claim text.
    struct Table(Vec<(&'static str, Vec<f64>)>, bool);

    impl EmbeddingBackend for Table {
        fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
            Ok(texts.iter().map(|t| self.0.iter().find(|(k, _)| k == t).unwrap().1.clone()).collect())
        }
        fn dimension(&self) -> usize {
            2
        }
        fn normalized(&self) -> bool {
            self.1
        }
    }

    #[test]
    fn top_k_then_threshold() {
        let backend = Table(
            vec![("x", vec![1.0, 0.0]), ("near", vec![0.9, 0.1]), ("mid", vec![0.5, 0.5]), ("far", vec![0.0, 1.0])],
            false,
        );
        let claims = vec![claim("a-0", "a", "x"), claim("b-0", "b", "near"), claim("b-1", "b", "mid"), claim("b-2", "b", "far")];
        let cfg = FilterConfig { top_k: 1, ..Default::default() };
        let out = embed_filter(&claims, &backend, &cfg).unwrap();
        let pairs: Vec<_> = out.candidates.iter().map(|p| (p.claim_a.as_str(), p.claim_b.as_str())).collect();
        // a-0 keeps near; every b claim's single neighbour is a-0, but far scores 0.
        assert_eq!(pairs, vec![("a-0", "b-0"), ("a-0", "b-1")]);
        assert_eq!(out.retained_before_dedup, 3);
        assert_eq!(out.pairs_scored, 6);
    }

    #[test]
    fn same_article_pairs_never_scored() {
        let claims = vec![claim("a-0", "a", "volcano erupted"), claim("a-1", "a", "volcano erupted")];
        let out = embed_filter(&claims, &HashingEmbedder::default(), &FilterConfig::default()).unwrap();
        assert!(out.candidates.is_empty());
        assert_eq!(out.pairs_scored, 0);
    }

    #[test]
    fn ties_break_on_claim_id() {
        let claims = vec![
            claim("a-0", "a", "volcano erupted"),
            claim("b-1", "b", "volcano erupted"),
            claim("c-0", "c", "volcano erupted"),
            claim("b-0", "b", "volcano erupted"),
        ];
        let cfg = FilterConfig { top_k: 1, ..Default::default() };
        let out = embed_filter(&claims, &HashingEmbedder::default(), &cfg).unwrap();
        let pairs: Vec<_> = out.candidates.iter().map(|p| (p.claim_a.as_str(), p.claim_b.as_str())).collect();
        // Every claim picks the smallest id among equally similar neighbours.
        assert_eq!(pairs, vec![("a-0", "b-0"), ("a-0", "b-1"), ("a-0", "c-0")]);
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        struct Bad;
        impl EmbeddingBackend for Bad {
            fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, BackendError> {
                Ok(texts.iter().map(|_| vec![1.0; 3]).collect())
            }
            fn dimension(&self) -> usize {
                4
            }
            fn normalized(&self) -> bool {
                false
            }
        }
        let claims = vec![claim("a-0", "a", "x"), claim("b-0", "b", "y")];
        assert!(matches!(
            embed_filter(&claims, &Bad, &FilterConfig::default()),
            Err(FilterError::DimensionMismatch { expected: 4, got: 3 })
        ));
    }
}
