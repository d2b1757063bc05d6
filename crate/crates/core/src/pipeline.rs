//! The staged pipeline over a [`ClusterStore`]: ingest, extract, filter,
//! link, annotate. Each stage reads the previous stage's output from the
//! cluster document and writes its own back, discarding anything downstream.

use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::annotate::{annotate_cluster, AnnotateError};
use crate::claims::{extract_cluster_claims, validate_claims, CLAIM_PROMPT_VERSION};
use crate::config::{Backends, ConfigError, PipelineConfig};
use crate::corpus::{fetch_cluster, CorpusError, FetchOptions, Manifest};
use crate::eval::{build_eval_set, evaluate_filter, EvalError, EvalReport, Gold, PairScorer};
use crate::filter::{cross_article_pair_count, run_filter, FilterError, FilterMethod};
use crate::link::{link_candidates, project_links, LinkError};
use crate::store::{ClusterDocument, ClusterStore, FilterRun, StoreError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{missing} missing; run {command}")]
    MissingStage { missing: &'static str, command: &'static str },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Annotate(#[from] AnnotateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("stored claims are inconsistent with the cluster: {0}")]
    InconsistentClaims(String),
}

fn missing(missing: &'static str, command: &'static str) -> PipelineError {
    PipelineError::MissingStage { missing, command }
}

pub struct Pipeline {
    pub config: PipelineConfig,
    pub backends: Backends,
    pub store: ClusterStore,
}

/// Arguments of an evaluation run; unset values fall back to the config.
#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub input: PathBuf,
    pub method: FilterMethod,
    pub threshold: Option<f64>,
    pub negatives: usize,
    pub seed: Option<u64>,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        let backends = config.build_backends()?;
        Ok(Self::with_backends(config, backends))
    }

    /// Use explicit backends instead of the ones the config describes.
    pub fn with_backends(config: PipelineConfig, backends: Backends) -> Self {
        let store = ClusterStore::new(&config.data_dir);
        Self { config, backends, store }
    }

    pub fn ingest(&self, manifest_path: &Path) -> Result<ClusterDocument, PipelineError> {
        let (manifest, base) = Manifest::load(manifest_path)?;
        let opts = FetchOptions {
            timeout: Duration::from_secs_f64(self.config.fetch_timeout_secs),
            parallelism: self.config.parallelism,
            ..FetchOptions::default()
        };
        let outcome = fetch_cluster(&manifest, &base, &opts)?;
        let doc = ClusterDocument::new(outcome.cluster, outcome.failures);
        self.store.save(&doc)?;
        tracing::info!(cluster = %doc.cluster.cluster_id, articles = doc.cluster.articles.len(), "ingested");
        Ok(doc)
    }

    pub fn extract(&self, cluster_id: &str) -> Result<ClusterDocument, PipelineError> {
        let mut doc = self.store.load(cluster_id)?;
        doc.clear_from_claims();
        let claims = extract_cluster_claims(&doc.cluster, self.backends.completion.as_ref(), self.config.parallelism);
        validate_claims(&doc.cluster, &claims).map_err(PipelineError::InconsistentClaims)?;
        tracing::info!(cluster = cluster_id, claims = claims.len(), "extracted claims");
        doc.claims = Some(claims);
        doc.claim_prompt_version = Some(CLAIM_PROMPT_VERSION.to_string());
        self.store.save(&doc)?;
        Ok(doc)
    }

    pub fn filter(&self, cluster_id: &str) -> Result<ClusterDocument, PipelineError> {
        let mut doc = self.store.load(cluster_id)?;
        let claims = doc.claims.clone().ok_or_else(|| missing("claims", "extract"))?;
        doc.clear_from_candidates();
        let cfg = &self.config.filter;
        let outcome = run_filter(&claims, self.backends.embedding.as_ref(), cfg)?;
        let cross = cross_article_pair_count(claims.iter().map(|c| c.article_id.as_str()));
        tracing::info!(
            cluster = cluster_id,
            method = cfg.method.short_name(),
            cross_article_pairs = cross,
            candidates = outcome.candidates.len(),
            "filtered candidates"
        );
        doc.filter = Some(FilterRun {
            config: cfg.clone(),
            pairs_scored: outcome.pairs_scored,
            retained_before_dedup: outcome.retained_before_dedup,
            cross_article_pairs: cross,
        });
        doc.candidates = Some(outcome.candidates);
        self.store.save(&doc)?;
        Ok(doc)
    }

    pub fn link(&self, cluster_id: &str) -> Result<ClusterDocument, PipelineError> {
        let mut doc = self.store.load(cluster_id)?;
        let claims = doc.claims.clone().ok_or_else(|| missing("claims", "extract"))?;
        let candidates = doc.candidates.clone().ok_or_else(|| missing("candidates", "filter"))?;
        doc.clear_from_links();
        let links = link_candidates(
            &candidates,
            &claims,
            self.backends.nli.as_ref(),
            self.config.link_cap,
            self.config.parallelism,
        );
        let sentence_links = project_links(&links, &claims)?;
        tracing::info!(cluster = cluster_id, links = links.len(), sentence_links = sentence_links.len(), "linked");
        doc.link_cap = Some(self.config.link_cap);
        doc.links = Some(links);
        doc.sentence_links = Some(sentence_links);
        self.store.save(&doc)?;
        Ok(doc)
    }

    pub fn annotate(&self, cluster_id: &str) -> Result<ClusterDocument, PipelineError> {
        let mut doc = self.store.load(cluster_id)?;
        let sentence_links = doc.sentence_links.clone().ok_or_else(|| missing("links", "link"))?;
        doc.annotations = Some(annotate_cluster(&doc.cluster, &sentence_links)?);
        self.store.save(&doc)?;
        Ok(doc)
    }

    /// Every stage in order for a manifest.
    pub fn run(&self, manifest_path: &Path) -> Result<ClusterDocument, PipelineError> {
        let id = self.ingest(manifest_path)?.cluster.cluster_id;
        self.extract(&id)?;
        self.filter(&id)?;
        self.link(&id)?;
        self.annotate(&id)
    }

    pub fn eval(&self, args: &EvalArgs) -> Result<EvalReport, PipelineError> {
        let seed = args.seed.unwrap_or(self.config.seed);
        let pairs = build_eval_set(&args.input, args.negatives, seed)?;
        let scorer = match args.method {
            FilterMethod::LexicalOverlap => PairScorer::Lexical,
            FilterMethod::EmbeddingSimilarity => PairScorer::Embedding(self.backends.embedding.as_ref()),
        };
        let threshold = args.threshold.unwrap_or(match args.method {
            FilterMethod::LexicalOverlap => self.config.filter.jaccard_threshold,
            FilterMethod::EmbeddingSimilarity => self.config.filter.cosine_threshold,
        });
        let metrics = evaluate_filter(&scorer, threshold, &pairs)?;
        Ok(EvalReport {
            method: args.method,
            threshold,
            positives: pairs.iter().filter(|p| p.gold == Gold::Positive).count(),
            negatives: pairs.iter().filter(|p| p.gold == Gold::Negative).count(),
            seed,
            metrics,
        })
    }
}
