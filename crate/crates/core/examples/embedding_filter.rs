//! Embedding-similarity filtering: each claim keeps its k nearest claims from
//! other articles, then pairs under the cosine threshold are dropped.
//!
//!     cargo run --example embedding_filter [-- K THRESHOLD]

use storylink::backends::stub::HashingEmbedder;
use storylink::claims::{claim_id, Claim, ExtractionMethod};
use storylink::filter::{cross_article_pair_count, embed_filter, FilterConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let top_k = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let cosine_threshold = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.3);

    let texts = [
        ("a000", "The Ashwater river burst its banks on Monday."),
        ("a000", "Two hundred residents were evacuated."),
        ("a000", "The mayor praised the volunteers."),
        ("a001", "On Monday the Ashwater river burst its banks."),
        ("a001", "About 200 residents were evacuated from the north side."),
        ("a002", "Residents were not evacuated."),
        ("a002", "Rail services were suspended."),
    ];
    let claims: Vec<Claim> = texts
        .iter()
        .enumerate()
        .map(|(i, (a, t))| Claim {
            claim_id: claim_id(a, i, 0),
            article_id: a.to_string(),
            sentence_index: i,
            text: t.to_string(),
            extraction_method: ExtractionMethod::Passthrough,
        })
        .collect();

    let cfg = FilterConfig { top_k, cosine_threshold, ..Default::default() };
    let out = embed_filter(&claims, &HashingEmbedder::default(), &cfg)?;
    println!(
        "{} cross-article pairs, {} kept before dedup, {} candidates (k={top_k}, threshold={cosine_threshold})",
        cross_article_pair_count(claims.iter().map(|c| c.article_id.as_str())),
        out.retained_before_dedup,
        out.candidates.len()
    );
    for c in &out.candidates {
        println!("  {:.3}  {}  <->  {}", c.score, c.claim_a, c.claim_b);
    }
    Ok(())
}
