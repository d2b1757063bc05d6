//! Configure hosted model backends from TOML.
//!
//! API keys are read from the environment variable named by `api_key_env`,
//! never from the file. With `STORYLINK_EMBED_URL` set, the example also
//! embeds two sentences through that endpoint.
//!
//!     STORYLINK_EMBED_URL=http://localhost:8080/embed cargo run --example http_backends

use storylink::backends::cosine_similarity;
use storylink::config::PipelineConfig;

const CONFIG: &str = r#"
profile = "live"
parallelism = 4

[backends.embedding]
kind = "http"
url = "http://localhost:8080/embed"
dimension = 384
normalized = true

[backends.nli]
kind = "http"
url = "http://localhost:8080/nli"
api_key_env = "NLI_API_KEY"
timeout_secs = 10
max_retries = 2

[backends.completion]
kind = "stub"
"#;

fn main() -> anyhow::Result<()> {
    let mut cfg = PipelineConfig::parse(CONFIG)?;
    match std::env::var("STORYLINK_EMBED_URL") {
        Ok(url) => cfg.backends.embedding.url = Some(url),
        Err(_) => {
            println!("{:#?}", cfg.backends);
            println!("set STORYLINK_EMBED_URL to call a real endpoint");
            return Ok(());
        }
    }
    let backends = cfg.build_backends()?;
    let texts = vec!["The river flooded the town.".to_string(), "The town was flooded by the river.".to_string()];
    let v = backends.embedding.embed(&texts)?;
    println!("cosine = {:.4}", cosine_similarity(&v[0], &v[1]));
    Ok(())
}
