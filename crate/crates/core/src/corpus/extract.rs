//! Boilerplate removal: pull the title and paragraph text out of an HTML page.

use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;
use scraper::{ElementRef, Html, Node, Selector};

use super::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedDocument {
    pub title: String,
    pub body: String,
    /// `og:site_name` when the page declares one.
    pub site_name: Option<String>,
}

/// Tags whose contents are never article text.
const BOILERPLATE_TAGS: &[&str] = &[
    "nav", "header", "footer", "aside", "script", "style", "noscript", "form", "button", "select",
    "template", "svg", "iframe", "figcaption",
];

/// Paragraphs whose link text exceeds this share of their text are dropped.
const MAX_LINK_DENSITY: f64 = 0.5;

/// Containers scoring below this fraction of the best container are dropped.
const MIN_CONTAINER_SHARE: f64 = 0.25;

fn html_marker() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)<\s*(!doctype|html|head|body|p|div|article|main|section|title|span|br|meta)\b").unwrap()
    })
}

fn boilerplate_attr() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"(?i)(^|[\s_-])(nav|navbar|menu|footer|sidebar|comments?|share|social|promo|advert\w*|ads?|cookies?|newsletter|subscribe|related|breadcrumbs?|masthead)($|[\s_-])",
        )
        .unwrap()
    })
}

fn selector(css: &str) -> Selector {
    Selector::parse(css).expect("static selector")
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn looks_like_html(input: &str) -> bool {
    html_marker().is_match(input)
}

/// Extract `(title, body)` from HTML, or pass plain text through untouched.
///
/// Paragraphs are scored by text length, grouped by their parent container,
/// and kept when their container carries a meaningful share of the page's
/// paragraph text. Paragraphs inside navigation, headers, footers, asides or
/// link-heavy blocks never count.
pub fn extract_body(input: &str) -> Result<ExtractedDocument, CorpusError> {
    if !looks_like_html(input) {
        if input.trim().is_empty() {
            return Err(CorpusError::EmptyDocument);
        }
        return Ok(ExtractedDocument { title: String::new(), body: input.to_string(), site_name: None });
    }

    let doc = Html::parse_document(input);
    let title = extract_title(&doc);
    let site_name = meta_content(&doc, "og:site_name");

    // (parent container node, paragraph text)
    let mut paras = Vec::new();
    for p in doc.select(&selector("p")) {
        if in_boilerplate(p) {
            continue;
        }
        let (text, link_len) = visible_text(p);
        let text = collapse_ws(&text);
        if text.is_empty() {
            continue;
        }
        let total = text.chars().count() as f64;
        if link_len as f64 / total > MAX_LINK_DENSITY {
            continue;
        }
        if text.split_whitespace().count() < 4 && !text.ends_with(['.', '!', '?', '"', '\u{201d}']) {
            continue;
        }
        let container = p.parent().map_or(p.id(), |n| n.id());
        paras.push((container, text));
    }

    let mut scores: HashMap<_, usize> = HashMap::new();
    for (container, text) in &paras {
        *scores.entry(*container).or_default() += text.chars().count();
    }
    let best = scores.values().copied().max().unwrap_or(0);
    let cutoff = best as f64 * MIN_CONTAINER_SHARE;
    let kept: Vec<String> = paras
        .into_iter()
        .filter(|(container, _)| scores[container] as f64 >= cutoff)
        .map(|(_, text)| text)
        .collect();

    if kept.is_empty() {
        return Err(CorpusError::EmptyDocument);
    }
    Ok(ExtractedDocument { title, body: kept.join("\n\n"), site_name })
}

fn meta_content(doc: &Html, property: &str) -> Option<String> {
    let sel = selector(&format!(r#"meta[property="{property}"], meta[name="{property}"]"#));
    doc.select(&sel)
        .filter_map(|m| m.value().attr("content"))
        .map(collapse_ws)
        .find(|s| !s.is_empty())
}

fn extract_title(doc: &Html) -> String {
    if let Some(t) = meta_content(doc, "og:title") {
        return t;
    }
    for css in ["title", "h1"] {
        if let Some(el) = doc.select(&selector(css)).next() {
            let t = collapse_ws(&el.text().collect::<String>());
            if !t.is_empty() {
                return t;
            }
        }
    }
    String::new()
}

fn in_boilerplate(el: ElementRef<'_>) -> bool {
    el.ancestors().filter_map(ElementRef::wrap).any(|a| {
        let v = a.value();
        BOILERPLATE_TAGS.contains(&v.name())
            || v.attr("role").is_some_and(|r| r == "navigation" || r == "complementary")
            || v.attr("class").is_some_and(|c| boilerplate_attr().is_match(c))
            || v.attr("id").is_some_and(|c| boilerplate_attr().is_match(c))
    })
}

/// Text under `el` skipping script/style, plus the char count of link text.
fn visible_text(el: ElementRef<'_>) -> (String, usize) {
    let mut text = String::new();
    let mut link_chars = 0;
    for node in el.descendants() {
        if let Node::Text(t) = node.value() {
            let hidden = node
                .ancestors()
                .filter_map(ElementRef::wrap)
                .take_while(|a| a.id() != el.id())
                .any(|a| matches!(a.value().name(), "script" | "style" | "noscript"));
            if hidden {
                continue;
            }
            let in_link = node
                .ancestors()
                .filter_map(ElementRef::wrap)
                .take_while(|a| a.id() != el.id())
                .any(|a| a.value().name() == "a");
            if in_link {
                link_chars += collapse_ws(t).chars().count();
            }
            text.push_str(t);
        } else if let Node::Element(e) = node.value() {
            if e.name() == "br" {
                text.push(' ');
            }
        }
    }
    (text, link_chars)
}
