//! Every stage on a manifest, with the all-stub backends, into a data dir.
//!
//!     cargo run --example run_pipeline [-- manifest.json data-dir]

use std::path::PathBuf;

use storylink::config::PipelineConfig;
use storylink::pipeline::Pipeline;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let manifest = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/story/manifest.json"));
    let tmp = tempfile::tempdir()?;
    let data_dir = args.next().map(PathBuf::from).unwrap_or_else(|| tmp.path().to_path_buf());

    let pipeline = Pipeline::new(PipelineConfig { data_dir, ..Default::default() })?;
    let doc = pipeline.run(&manifest)?;
    println!("cluster {}", doc.cluster.cluster_id);
    for a in &doc.cluster.articles {
        println!("  {} {:<16} {} sentences", a.article_id, a.venue, a.sentences.len());
    }
    if let Some(f) = &doc.filter {
        println!("filter: {} cross-article pairs, {} scored", f.cross_article_pairs, f.pairs_scored);
    }
    println!(
        "claims {}, candidates {}, links {}, sentence links {}",
        doc.claims.as_ref().map_or(0, Vec::len),
        doc.candidates.as_ref().map_or(0, Vec::len),
        doc.links.as_ref().map_or(0, Vec::len),
        doc.sentence_links.as_ref().map_or(0, Vec::len),
    );
    println!("stored at {}", pipeline.store.path_for(&doc.cluster.cluster_id)?.display());
    Ok(())
}
