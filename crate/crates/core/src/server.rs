//! Read-only HTTP API over the cluster store, consumed by the reader UI.
//!
//! - `GET /api/health`
//! - `GET /api/clusters`
//! - `GET /api/clusters/{cid}/articles`
//! - `GET /api/clusters/{cid}/articles/{aid}`

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};

use crate::annotate::{annotate_article, AnnotatedArticle};
use crate::config::ServerConfig;
use crate::store::{valid_id, ClusterDocument, ClusterStore, ClusterSummary, StoreError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleSummary {
    pub article_id: String,
    pub url: String,
    pub venue: String,
    pub title: String,
    pub sentence_count: usize,
    pub highlight_count: usize,
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Internal(String),
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::InvalidId(_) => ApiError::BadRequest(e.to_string()),
            StoreError::NotFound(_) => ApiError::NotFound(e.to_string()),
            StoreError::Corrupt { .. } | StoreError::Io { .. } => {
                tracing::error!(error = %e, "store failure");
                ApiError::Internal("cluster store is unreadable".into())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(serde_json::json!({ "error": message }))).into_response()
    }
}

type Shared = Arc<ClusterStore>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn load(store: Shared, cid: String) -> Result<ClusterDocument, ApiError> {
    blocking(move || Ok(store.load(&cid)?)).await
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn clusters(State(store): State<Shared>) -> Result<Json<Vec<ClusterSummary>>, ApiError> {
    Ok(Json(blocking(move || Ok(store.list()?)).await?))
}

async fn articles(State(store): State<Shared>, Path(cid): Path<String>) -> Result<Json<Vec<ArticleSummary>>, ApiError> {
    let doc = load(store, cid).await?;
    let highlights = |aid: &str| {
        doc.annotations
            .as_ref()
            .and_then(|anns| anns.iter().find(|a| a.article_id == aid))
            .map_or(0, |a| a.highlights.len())
    };
    Ok(Json(
        doc.cluster
            .articles
            .iter()
            .map(|a| ArticleSummary {
                article_id: a.article_id.clone(),
                url: a.url.clone(),
                venue: a.venue.clone(),
                title: a.title.clone(),
                sentence_count: a.sentences.len(),
                highlight_count: highlights(&a.article_id),
            })
            .collect(),
    ))
}

async fn article(
    State(store): State<Shared>,
    Path((cid, aid)): Path<(String, String)>,
) -> Result<Json<AnnotatedArticle>, ApiError> {
    if !valid_id(&aid) {
        return Err(ApiError::BadRequest(format!("invalid id {aid:?}")));
    }
    let doc = load(store, cid).await?;
    if let Some(found) = doc.annotations.as_ref().and_then(|anns| anns.iter().find(|a| a.article_id == aid)) {
        return Ok(Json(found.clone()));
    }
    if doc.cluster.article(&aid).is_none() {
        return Err(ApiError::NotFound(format!("article {aid} not found")));
    }
    // Not annotated yet: whatever links exist, possibly none.
    let links = doc.sentence_links.unwrap_or_default();
    annotate_article(&doc.cluster, &links, &aid)
        .map(Json)
        .map_err(|e| ApiError::Internal(e.to_string()))
}

fn cors(cfg: &ServerConfig) -> CorsLayer {
    let layer = CorsLayer::new().allow_methods([axum::http::Method::GET]).allow_headers(Any);
    if cfg.cors_origins.is_empty() {
        return layer.allow_origin(Any);
    }
    let origins: Vec<HeaderValue> = cfg
        .cors_origins
        .iter()
        .filter_map(|o| match HeaderValue::from_str(o) {
            Ok(v) => Some(v),
            Err(_) => {
                tracing::warn!(origin = %o, "ignoring invalid CORS origin");
                None
            }
        })
        .collect();
    layer.allow_origin(origins)
}

pub fn router(store: ClusterStore, cfg: &ServerConfig) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/clusters", get(clusters))
        .route("/api/clusters/{cid}/articles", get(articles))
        .route("/api/clusters/{cid}/articles/{aid}", get(article))
        .with_state(Arc::new(store))
        .layer(cors(cfg))
}

/// Serve until Ctrl-C.
pub async fn serve(store: ClusterStore, cfg: &ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((cfg.bind.as_str(), cfg.port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router(store, cfg))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
