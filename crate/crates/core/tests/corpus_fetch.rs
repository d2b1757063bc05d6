mod common;

use std::time::Duration;

use axum::http::StatusCode;
use axum::routing::get;
use storylink::corpus::{fetch_cluster, FetchOptions, Manifest};

const PAGE_ONE: &str = r#"<html><head><meta property="og:title" content="Dam holds"></head><body>
<nav><a href="/">Home</a> <a href="/x">Other</a></nav>
<article><p>The dam held overnight. Engineers were relieved.</p><p>Water levels fell by morning.</p></article>
<footer><p>All rights reserved.</p></footer></body></html>"#;

const PAGE_THREE: &str = "<html><head><title>Roads</title></head><body><div><p>Roads reopened on Monday. Traffic was light.</p></div></body></html>";

#[test]
fn fetches_urls_and_records_failures() {
    let base = common::spawn_server(
        axum::Router::new()
            .route("/one", get(|| async { axum::response::Html(PAGE_ONE) }))
            .route("/two", get(|| async { (StatusCode::NOT_FOUND, "gone") }))
            .route("/three", get(|| async { axum::response::Html(PAGE_THREE) })),
    );
    let manifest = Manifest::parse(&format!(
        r#"{{"story_title": "Local fetch", "urls": ["{base}/one", "{base}/two", "{base}/three"]}}"#
    ))
    .unwrap();
    let opts = FetchOptions { timeout: Duration::from_secs(5), parallelism: 3, ..Default::default() };
    let out = fetch_cluster(&manifest, std::path::Path::new("."), &opts).unwrap();

    let ids: Vec<_> = out.cluster.articles.iter().map(|a| a.article_id.as_str()).collect();
    assert_eq!(ids, vec!["a000", "a002"]);
    assert_eq!(out.failures.len(), 1);
    assert_eq!(out.failures[0].source, format!("{base}/two"));
    assert_eq!(out.failures[0].reason, "HTTP 404");
    assert!(!out.failures[0].unreachable);

    let first = &out.cluster.articles[0];
    assert_eq!(first.title, "Dam holds");
    assert_eq!(first.venue, "127.0.0.1");
    let texts: Vec<_> = first.sentences.iter().map(|s| s.text.as_str()).collect();
    assert_eq!(texts, vec!["The dam held overnight.", "Engineers were relieved.", "Water levels fell by morning."]);
    assert_eq!(out.cluster.articles[1].title, "Roads");
    out.cluster.validate().unwrap();
}

#[test]
fn local_story_fixture_extracts_article_text_only() {
    let (manifest, base) = Manifest::load(&common::story_manifest()).unwrap();
    let out = fetch_cluster(&manifest, &base, &FetchOptions::default()).unwrap();
    let counts: Vec<_> = out.cluster.articles.iter().map(|a| a.sentences.len()).collect();
    assert_eq!(counts, vec![14, 15, 15]);
    for a in &out.cluster.articles {
        for junk in ["cookie", "Copyright", "newsletter", "Related", "Subscribe", "Share", "By Dana"] {
            assert!(!a.body.contains(junk), "{} kept {junk:?}", a.article_id);
        }
    }
    let venues: Vec<_> = out.cluster.articles.iter().map(|a| a.venue.as_str()).collect();
    assert_eq!(venues, vec!["Valley Courier", "Dunmore Gazette", "northern-wire"]);
}
