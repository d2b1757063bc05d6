//! Build the sample cluster and serve it to the reader.
//!
//!     cargo run --example serve_cluster [-- PORT]
//!     curl localhost:8787/api/clusters

use std::path::PathBuf;

use storylink::config::{PipelineConfig, ServerConfig};
use storylink::pipeline::Pipeline;

fn main() -> anyhow::Result<()> {
    let port = std::env::args().nth(1).map(|p| p.parse()).transpose()?.unwrap_or(8787);
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/story/manifest.json");
    let tmp = tempfile::tempdir()?;
    let pipeline = Pipeline::new(PipelineConfig { data_dir: tmp.path().into(), ..Default::default() })?;
    let doc = pipeline.run(&manifest)?;

    let server = ServerConfig { port, ..Default::default() };
    println!("http://{}:{port}/api/clusters/{}/articles  (Ctrl-C to stop)", server.bind, doc.cluster.cluster_id);
    tokio::runtime::Runtime::new()?.block_on(storylink::server::serve(pipeline.store.clone(), &server))?;
    Ok(())
}
