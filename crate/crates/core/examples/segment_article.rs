//! Strip boilerplate from an HTML page and split the body into sentences.
//!
//!     cargo run --example segment_article [-- page.html]

use std::path::PathBuf;

use storylink::corpus::{extract_body, segment_sentences};

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/story/valley-courier.html")
    });
    let doc = extract_body(&std::fs::read_to_string(&path)?)?;
    println!("title: {}", doc.title);
    println!("site:  {}", doc.site_name.as_deref().unwrap_or("(none)"));
    for s in segment_sentences(&doc.body) {
        println!("[{:>2}] {:>5}..{:<5} {}", s.sentence_index, s.span_start, s.span_end, s.text);
    }
    Ok(())
}
