//! Tokenization shared by lexical overlap, the stub encoder and the rule NLI stub.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use unicode_segmentation::UnicodeSegmentation;

use super::porter;

static STOPWORD_ASSET: &str = include_str!("../../assets/stopwords.txt");

/// The shipped English stopword list.
pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORD_ASSET
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect()
    })
}

pub fn is_stopword(token: &str) -> bool {
    stopwords().contains(token)
}

/// Unicode words, lowercased, with typographic apostrophes folded to `'`.
/// Pure punctuation never appears; numerals are kept.
pub fn words(text: &str) -> Vec<String> {
    text.unicode_words()
        .map(|w| w.to_lowercase().replace(['\u{2019}', '\u{2018}'], "'"))
        .collect()
}

/// Stemmed, stopword-free tokens in text order (duplicates kept).
pub fn content_terms(text: &str) -> Vec<String> {
    words(text)
        .into_iter()
        .filter(|w| !is_stopword(w))
        .map(|w| porter::stem(&w))
        .collect()
}

/// The term set used by the Jaccard score.
pub fn term_set(text: &str) -> BTreeSet<String> {
    content_terms(text).into_iter().collect()
}
