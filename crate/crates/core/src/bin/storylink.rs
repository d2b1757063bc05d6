use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use storylink::config::{PipelineConfig, Profile, DATA_DIR_ENV};
use storylink::filter::FilterMethod;
use storylink::pipeline::{EvalArgs, Pipeline};
use storylink::store::ClusterDocument;

#[derive(Parser)]
#[command(name = "storylink", version, about = "Link claims across news articles covering the same story")]
struct Cli {
    /// TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    profile: Option<Profile>,
    /// Candidate filter: es (embedding similarity) or leo (lexical overlap).
    #[arg(long, global = true)]
    method: Option<FilterMethod>,
    /// Neighbours kept per claim by the embedding filter.
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    cosine_threshold: Option<f64>,
    #[arg(long, global = true)]
    jaccard_threshold: Option<f64>,
    /// Links kept per NLI class.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    port: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fetch and segment the articles of a manifest into a new cluster.
    Ingest { manifest: PathBuf },
    /// Extract claims from every sentence of a cluster.
    Extract { cluster_id: String },
    /// Select candidate claim pairs.
    Filter { cluster_id: String },
    /// Classify candidates with NLI and project links onto sentences.
    Link { cluster_id: String },
    /// Build highlights for every article of a cluster.
    Annotate { cluster_id: String },
    /// All stages for a manifest.
    Run { manifest: PathBuf },
    /// Measure a filter against labelled NLI pairs plus random negatives.
    Eval {
        /// TSV or JSONL of (premise, hypothesis, label).
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the configured threshold of the chosen method.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 500)]
        negatives: usize,
        /// Also write the metrics JSON here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Serve annotations over HTTP.
    Serve,
}

fn config(cli: &Cli) -> anyhow::Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(d) = &cli.data_dir {
        cfg.data_dir = d.clone();
    }
    if let Some(p) = cli.profile {
        cfg.profile = p;
    }
    if let Some(m) = cli.method {
        cfg.filter.method = m;
    }
    if let Some(k) = cli.k {
        cfg.filter.top_k = k;
    }
    if let Some(t) = cli.cosine_threshold {
        cfg.filter.cosine_threshold = t;
    }
    if let Some(t) = cli.jaccard_threshold {
        cfg.filter.jaccard_threshold = t;
    }
    if let Some(c) = cli.cap {
        cfg.link_cap = c;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(p) = cli.port {
        cfg.server.port = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn count<T>(stage: &Option<Vec<T>>) -> String {
    stage.as_ref().map_or_else(|| "-".to_string(), |v| v.len().to_string())
}

fn summary(doc: &ClusterDocument) -> String {
    format!(
        "{}: {} articles, {} failed, claims {}, candidates {}, links {}, sentence links {}",
        doc.cluster.cluster_id,
        doc.cluster.articles.len(),
        doc.failures.len(),
        count(&doc.claims),
        count(&doc.candidates),
        count(&doc.links),
        count(&doc.sentence_links),
    )
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = config(&cli)?;
    if let Command::Serve = cli.command {
        let store = storylink::store::ClusterStore::new(&cfg.data_dir);
        let rt = tokio::runtime::Runtime::new()?;
        rt.block_on(storylink::server::serve(store, &cfg.server))?;
        return Ok(());
    }
    let method = cfg.filter.method;
    let pipeline = Pipeline::new(cfg)?;
    let doc = match &cli.command {
        Command::Ingest { manifest } => pipeline.ingest(manifest)?,
        Command::Extract { cluster_id } => pipeline.extract(cluster_id)?,
        Command::Filter { cluster_id } => pipeline.filter(cluster_id)?,
        Command::Link { cluster_id } => pipeline.link(cluster_id)?,
        Command::Annotate { cluster_id } => pipeline.annotate(cluster_id)?,
        Command::Run { manifest } => pipeline.run(manifest)?,
        Command::Eval { input, threshold, negatives, output } => {
            let report = pipeline.eval(&EvalArgs {
                input: input.clone(),
                method,
                threshold: *threshold,
                negatives: *negatives,
                seed: cli.seed,
            })?;
            print!("{}", report.table());
            let json = serde_json::to_string_pretty(&report)?;
            match output {
                Some(path) => std::fs::write(path, json + "\n")?,
                None => println!("{json}"),
            }
            return Ok(());
        }
        Command::Serve => unreachable!(),
    };
    for f in &doc.failures {
        eprintln!("warning: {} failed: {}", f.source, f.reason);
    }
    println!("{}", summary(&doc));
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "storylink=warn".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
