//! Lexical-overlap filtering: Porter-stemmed, stopword-free token sets
//! compared with the Jaccard index.
//!
//!     cargo run --example lexical_overlap

use storylink::claims::{Claim, ExtractionMethod};
use storylink::filter::{lexical_filter, lexical_overlap_score, stem, tokens, FilterConfig, FilterMethod};

fn claim(article: &str, i: usize, text: &str) -> Claim {
    Claim {
        claim_id: storylink::claims::claim_id(article, i, 0),
        article_id: article.into(),
        sentence_index: i,
        text: text.into(),
        extraction_method: ExtractionMethod::Passthrough,
    }
}

fn main() {
    for w in ["flooding", "generalizations", "relational", "happiness"] {
        println!("stem({w}) = {}", stem(w));
    }
    let a = "The council closed the Ashwater bridge on Tuesday.";
    let b = "Officials closed the bridge over the Ashwater.";
    println!("\n{:?}\n{:?}", tokens::term_set(a), tokens::term_set(b));
    println!("jaccard = {:.3}", lexical_overlap_score(a, b));

    let claims = vec![
        claim("a000", 0, a),
        claim("a000", 1, "Water rose two meters overnight."),
        claim("a001", 0, b),
        claim("a001", 1, "The river rose by two meters during the night."),
        claim("a002", 0, "A shelter opened at the school."),
    ];
    let cfg = FilterConfig { method: FilterMethod::LexicalOverlap, ..Default::default() };
    let out = lexical_filter(&claims, &cfg);
    println!("\n{} pairs scored, {} kept:", out.pairs_scored, out.candidates.len());
    for c in out.candidates {
        println!("  {} {} {:.3}", c.claim_a, c.claim_b, c.score);
    }
}
