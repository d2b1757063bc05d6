//! Classify candidate pairs with NLI and project the links onto sentences.
//!
//! Uses the rule-based stub: same stemmed content words means entailment,
//! unless exactly one side is negated, which means contradiction.
//!
//!     cargo run --example link_claims

use storylink::backends::stub::RuleNli;
use storylink::claims::{claim_id, Claim, ExtractionMethod};
use storylink::filter::{lexical_filter, FilterConfig, FilterMethod};
use storylink::link::{link_candidates, project_links, DEFAULT_CAP};

fn main() -> anyhow::Result<()> {
    let texts = [
        ("a000", 0, "The bridge was closed on Tuesday."),
        ("a000", 1, "Schools opened as shelters."),
        ("a001", 0, "On Tuesday the bridge was closed."),
        ("a001", 3, "Schools were not opened as shelters."),
        ("a002", 2, "The bridge closed Tuesday for inspections."),
    ];
    let claims: Vec<Claim> = texts
        .iter()
        .map(|(a, s, t)| Claim {
            claim_id: claim_id(a, *s, 0),
            article_id: a.to_string(),
            sentence_index: *s,
            text: t.to_string(),
            extraction_method: ExtractionMethod::Passthrough,
        })
        .collect();

    let cfg = FilterConfig { method: FilterMethod::LexicalOverlap, ..Default::default() };
    let candidates = lexical_filter(&claims, &cfg).candidates;
    let links = link_candidates(&candidates, &claims, &RuleNli, DEFAULT_CAP, 4);
    println!("{} candidates, {} links", candidates.len(), links.len());
    for l in &links {
        println!("  {:?} {:.2}  {} -> {}", l.label, l.confidence, l.premise_claim, l.hypothesis_claim);
    }
    for s in project_links(&links, &claims)? {
        println!(
            "  {}:{} ~ {}:{} {:?}",
            s.focus.article_id, s.focus.sentence_index, s.evidence.article_id, s.evidence.sentence_index, s.label
        );
    }
    Ok(())
}
