//! Rule-based English sentence segmentation over character offsets.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::Sentence;

static ABBREVIATION_ASSET: &str = include_str!("../../assets/abbreviations.txt");

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATION_ASSET
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

const TERMINALS: &[char] = &['.', '!', '?', '\u{2026}'];
const CLOSERS: &[char] = &['"', '\'', '\u{201d}', '\u{2019}', ')', ']'];
const OPENERS: &[char] = &['"', '\'', '\u{201c}', '\u{2018}', '(', '['];

/// Split `body` into sentences.
///
/// A boundary is terminal punctuation (plus any closing quotes or brackets)
/// followed by whitespace and then an uppercase letter or an opening quote.
/// Known abbreviations, single-letter initials and decimal numbers never end a
/// sentence. Blank lines always do. Spans are char offsets, end exclusive,
/// and each sentence is trimmed of surrounding whitespace.
pub fn segment_sentences(body: &str) -> Vec<Sentence> {
    let chars: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    for (block_start, block_end) in blocks(&chars) {
        let mut start = block_start;
        let mut i = block_start;
        while i < block_end {
            if TERMINALS.contains(&chars[i]) {
                if let Some(end) = boundary_at(&chars, i, block_end) {
                    push_sentence(&chars, start, end, &mut out);
                    start = end;
                    i = end;
                    continue;
                }
            }
            i += 1;
        }
        push_sentence(&chars, start, block_end, &mut out);
    }
    out
}

/// Ranges of text separated by blank lines.
fn blocks(chars: &[char]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '\n' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_whitespace() && chars[j] != '\n' {
                j += 1;
            }
            if j < chars.len() && chars[j] == '\n' {
                out.push((start, i));
                while j < chars.len() && chars[j].is_whitespace() {
                    j += 1;
                }
                start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    out.push((start, chars.len()));
    out
}

/// If the terminal at `i` closes a sentence, the exclusive end of that sentence.
fn boundary_at(chars: &[char], i: usize, limit: usize) -> Option<usize> {
    let mut end = i + 1;
    while end < limit && (TERMINALS.contains(&chars[end]) || CLOSERS.contains(&chars[end])) {
        end += 1;
    }
    if end >= limit || !chars[end].is_whitespace() {
        return None;
    }
    let mut next = end;
    while next < limit && chars[next].is_whitespace() {
        next += 1;
    }
    if next >= limit {
        return None;
    }
    let c = chars[next];
    if !(c.is_uppercase() || OPENERS.contains(&c)) {
        return None;
    }
    if chars[i] == '.' && end == i + 1 && is_protected_period(chars, i) {
        return None;
    }
    Some(end)
}

fn is_protected_period(chars: &[char], i: usize) -> bool {
    let mut s = i;
    while s > 0 && !chars[s - 1].is_whitespace() {
        s -= 1;
    }
    while s < i && OPENERS.contains(&chars[s]) {
        s += 1;
    }
    let token: String = chars[s..=i].iter().collect();
    let word = &chars[s..i];
    // Initials such as "J."
    if word.len() == 1 && word[0].is_uppercase() {
        return true;
    }
    abbreviations().contains(token.to_lowercase().as_str())
}

fn push_sentence(chars: &[char], mut start: usize, mut end: usize, out: &mut Vec<Sentence>) {
    while start < end && chars[start].is_whitespace() {
        start += 1;
    }
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if start < end {
        out.push(Sentence {
            sentence_index: out.len(),
            span_start: start,
            span_end: end,
            text: chars[start..end].iter().collect(),
        });
    }
}
