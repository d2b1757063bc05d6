//! Compare both filters on labelled NLI pairs plus random negatives.
//!
//! Any TSV or JSONL with premise/hypothesis/label columns works, including
//! the SNLI and MultiNLI distribution files.
//!
//!     cargo run --release --example evaluate_filters [-- pairs.tsv NEGATIVES]

use std::path::PathBuf;

use storylink::backends::stub::HashingEmbedder;
use storylink::eval::{build_eval_set, evaluate_filter, PairScorer};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/desk_nli_200.tsv"));
    let negatives = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100);

    let pairs = build_eval_set(&input, negatives, 1980)?;
    let embedder = HashingEmbedder::default();
    println!("{} pairs from {}", pairs.len(), input.display());
    println!("{:<5} {:>9} {:>9} {:>9} {:>9} {:>9}", "", "threshold", "precision", "recall", "macro-F1", "TNR");
    for (scorer, threshold) in [(PairScorer::Lexical, 0.1), (PairScorer::Embedding(&embedder), 0.3)] {
        let m = evaluate_filter(&scorer, threshold, &pairs)?;
        println!(
            "{:<5} {threshold:>9} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            scorer.method().short_name(),
            m.precision,
            m.recall,
            m.macro_f1,
            m.tnr
        );
    }
    Ok(())
}
