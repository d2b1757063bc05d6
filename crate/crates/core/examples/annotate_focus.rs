//! Show one article as a reader would: each highlighted sentence with its
//! polarity and the evidence from other outlets.
//!
//!     cargo run --example annotate_focus [-- ARTICLE_ID]

use std::path::PathBuf;

use storylink::annotate::annotate_article;
use storylink::config::PipelineConfig;
use storylink::pipeline::Pipeline;

fn main() -> anyhow::Result<()> {
    let focus = std::env::args().nth(1).unwrap_or_else(|| "a001".into());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/story/manifest.json");
    let tmp = tempfile::tempdir()?;
    let pipeline = Pipeline::new(PipelineConfig { data_dir: tmp.path().into(), ..Default::default() })?;
    let doc = pipeline.run(&manifest)?;

    let article = annotate_article(&doc.cluster, doc.sentence_links.as_deref().unwrap_or_default(), &focus)?;
    println!("{} ({})", article.title, article.venue);
    let sentences = &doc.cluster.article(&focus).expect("annotated article exists").sentences;
    for h in &article.highlights {
        println!("\n[{:?}] {}", h.polarity, sentences[h.sentence_index].text);
        for e in &h.evidence {
            println!("    {:?} {:.2} {}: {}", e.label, e.confidence, e.source_venue, e.snippet_text);
        }
    }
    Ok(())
}
