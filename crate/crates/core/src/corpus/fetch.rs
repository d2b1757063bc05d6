use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_article, ArticleCluster, CorpusError};
use crate::util;

/// Offline-friendly description of a story: URLs to fetch and/or local HTML files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub story_title: String,
    #[serde(default)]
    pub urls: Vec<String>,
    /// Paths relative to the manifest file.
    #[serde(default)]
    pub html_files: Vec<PathBuf>,
}

impl Manifest {
    pub fn parse(json: &str) -> Result<Self, CorpusError> {
        let m: Manifest = serde_json::from_str(json).map_err(|e| CorpusError::MalformedManifest(e.to_string()))?;
        m.check()?;
        Ok(m)
    }

    /// Load a manifest and return it with the directory its relative paths resolve against.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), CorpusError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CorpusError::MalformedManifest(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::parse(&text)?, base))
    }

    fn check(&self) -> Result<(), CorpusError> {
        if self.story_title.trim().is_empty() {
            return Err(CorpusError::MalformedManifest("story_title is empty".into()));
        }
        if self.urls.is_empty() && self.html_files.is_empty() {
            return Err(CorpusError::MalformedManifest("no urls or html_files".into()));
        }
        for u in &self.urls {
            let parsed = url::Url::parse(u).map_err(|e| CorpusError::MalformedManifest(format!("{u}: {e}")))?;
            if !matches!(parsed.scheme(), "http" | "https") {
                return Err(CorpusError::MalformedManifest(format!("{u}: only http(s) urls are fetched")));
            }
        }
        Ok(())
    }

    /// Stable identifier derived from the title and the sources.
    pub fn cluster_id(&self) -> String {
        let mut slug = String::new();
        for c in self.story_title.to_lowercase().chars() {
            if c.is_ascii_alphanumeric() {
                slug.push(c);
            } else if !slug.ends_with('-') && !slug.is_empty() {
                slug.push('-');
            }
            if slug.len() >= 40 {
                break;
            }
        }
        let slug = slug.trim_end_matches('-');
        let mut key = self.story_title.clone();
        for u in &self.urls {
            key.push('\n');
            key.push_str(u);
        }
        for f in &self.html_files {
            key.push('\n');
            key.push_str(&f.to_string_lossy());
        }
        let hash = util::fnv1a64(key.as_bytes());
        if slug.is_empty() {
            format!("story-{:08x}", hash as u32)
        } else {
            format!("{slug}-{:08x}", hash as u32)
        }
    }
}

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub timeout: Duration,
    pub parallelism: usize,
    pub user_agent: String,
}

impl Default for FetchOptions {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(20),
            parallelism: 8,
            user_agent: concat!("storylink/", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchFailure {
    pub source: String,
    pub reason: String,
    /// Whether the source could not be reached at all.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unreachable: bool,
}

#[derive(Debug, Clone)]
pub struct FetchOutcome {
    pub cluster: ArticleCluster,
    pub failures: Vec<FetchFailure>,
}

enum Source<'a> {
    Url(&'a str),
    File(&'a Path),
}

/// Fetch every manifest source, extract and segment it, and assemble the cluster.
///
/// Articles are numbered by their position in the manifest (URLs first, then
/// files), so ids stay stable when individual sources fail.
pub fn fetch_cluster(manifest: &Manifest, base_dir: &Path, opts: &FetchOptions) -> Result<FetchOutcome, CorpusError> {
    let sources: Vec<Source<'_>> = manifest
        .urls
        .iter()
        .map(|u| Source::Url(u))
        .chain(manifest.html_files.iter().map(|p| Source::File(p)))
        .collect();

    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(opts.timeout))
        .http_status_as_error(false)
        .user_agent(&opts.user_agent)
        .build()
        .into();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism.max(1))
        .build()
        .map_err(|e| CorpusError::Invalid(e.to_string()))?;

    let results: Vec<_> = pool.install(|| {
        sources
            .par_iter()
            .enumerate()
            .map(|(i, src)| {
                let article_id = format!("a{i:03}");
                match src {
                    Source::Url(u) => fetch_url(&agent, u).and_then(|html| {
                        build_article(&article_id, u, &venue_from_url(u), &html)
                            .map_err(|e| FetchFailure { source: u.to_string(), reason: e.to_string(), unreachable: false })
                    }),
                    Source::File(p) => {
                        let shown = p.to_string_lossy().into_owned();
                        std::fs::read_to_string(base_dir.join(p))
                            .map_err(|e| FetchFailure { source: shown.clone(), reason: e.to_string(), unreachable: false })
                            .and_then(|html| {
                                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                                build_article(&article_id, &format!("file:{shown}"), &stem, &html).map_err(|e| {
                                    FetchFailure { source: shown.clone(), reason: e.to_string(), unreachable: false }
                                })
                            })
                    }
                }
            })
            .collect()
    });

    let mut articles = Vec::new();
    let mut failures = Vec::new();
    for (src, r) in sources.iter().zip(results) {
        match r {
            Ok(Some(a)) => articles.push(a),
            Ok(None) => failures.push(FetchFailure {
                source: match src {
                    Source::Url(u) => u.to_string(),
                    Source::File(p) => p.to_string_lossy().into_owned(),
                },
                reason: "no sentences extracted".into(),
                unreachable: false,
            }),
            Err(f) => {
                tracing::warn!(source = %f.source, reason = %f.reason, "article failed");
                failures.push(f);
            }
        }
    }

    if articles.is_empty() {
        if !failures.is_empty() && failures.iter().all(|f| f.unreachable) {
            return Err(CorpusError::NetworkUnreachable(failures.len()));
        }
        return Err(CorpusError::AllArticlesFailed(failures));
    }

    let cluster = ArticleCluster {
        cluster_id: manifest.cluster_id(),
        story_title: manifest.story_title.clone(),
        articles,
        created_at: util::now(),
    };
    cluster.validate()?;
    Ok(FetchOutcome { cluster, failures })
}

fn fetch_url(agent: &ureq::Agent, url: &str) -> Result<String, FetchFailure> {
    let fail = |reason: String, unreachable: bool| FetchFailure { source: url.to_string(), reason, unreachable };
    let mut resp = match agent.get(url).call() {
        Ok(r) => r,
        Err(e) => {
            let unreachable = matches!(
                e,
                ureq::Error::ConnectionFailed | ureq::Error::HostNotFound | ureq::Error::Timeout(_) | ureq::Error::Io(_)
            );
            return Err(fail(e.to_string(), unreachable));
        }
    };
    let status = resp.status().as_u16();
    if !(200..300).contains(&status) {
        return Err(fail(format!("HTTP {status}"), false));
    }
    resp.body_mut().read_to_string().map_err(|e| fail(e.to_string(), false))
}

fn venue_from_url(u: &str) -> String {
    url::Url::parse(u)
        .ok()
        .and_then(|p| p.host_str().map(|h| h.trim_start_matches("www.").to_string()))
        .unwrap_or_else(|| u.to_string())
}
