//! Turn sentences into atomic claims.
//!
//! The default completion stub replays the worked examples of the claim
//! prompt and passes any other sentence through unchanged. Point a live
//! completion backend at the same prompt for real decomposition.
//!
//!     cargo run --example extract_claims

use storylink::backends::stub::ExemplarCompletion;
use storylink::claims::{extract_claims, render_prompt};
use storylink::corpus::segment_sentences;

fn main() {
    let body = "Lewis Hamilton and Mercedes have once again confirmed themselves as drivers and constructors world champions. \
                The race in Millbrook drew a record crowd.";
    let backend = ExemplarCompletion;
    for sentence in segment_sentences(body) {
        println!("sentence {}: {}", sentence.sentence_index, sentence.text);
        for c in extract_claims("a000", &sentence, &backend) {
            println!("  {} [{:?}] {}", c.claim_id, c.extraction_method, c.text);
        }
    }
    let prompt = render_prompt("Water reached the bridge deck.");
    println!("\nprompt tail:\n{}", prompt.lines().rev().take(2).collect::<Vec<_>>().join("\n"));
}
