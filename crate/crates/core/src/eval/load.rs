use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::link::NliLabel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NliExample {
    pub premise: String,
    pub hypothesis: String,
    pub label: NliLabel,
}

/// Label names, plus the 0/1/2 = entailment/neutral/contradiction integer
/// coding used by the GLUE-style distributions. Anything else (SNLI's `-`
/// for no consensus, for instance) is `None`.
fn parse_label(raw: &str) -> Option<NliLabel> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "entailment" | "0" => Some(NliLabel::Entailment),
        "neutral" | "1" => Some(NliLabel::Neutral),
        "contradiction" | "2" => Some(NliLabel::Contradiction),
        _ => None,
    }
}

const PREMISE_KEYS: [&str; 2] = ["premise", "sentence1"];
const HYPOTHESIS_KEYS: [&str; 2] = ["hypothesis", "sentence2"];
const LABEL_KEYS: [&str; 2] = ["label", "gold_label"];

/// Load NLI pairs from `.jsonl` (one object per line) or tab-separated text.
///
/// TSV files either start with a header naming `premise`/`sentence1`,
/// `hypothesis`/`sentence2` and `label`/`gold_label` columns (extra columns
/// are ignored), or have exactly those three columns in that order and no
/// header. Rows without a usable label or with an empty text are skipped.
pub fn load_nli_pairs(path: &Path) -> Result<Vec<NliExample>, EvalError> {
    let fail = |reason: String| EvalError::Input { path: path.display().to_string(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let jsonl = matches!(path.extension().and_then(|e| e.to_str()), Some("jsonl" | "json"));
    let (examples, skipped) = if jsonl { parse_jsonl(&text) } else { parse_tsv(&text) }.map_err(fail)?;
    if skipped > 0 {
        tracing::warn!(path = %path.display(), skipped, "NLI rows without a usable label or text skipped");
    }
    Ok(examples)
}

fn make(premise: &str, hypothesis: &str, label: &str) -> Option<NliExample> {
    let (premise, hypothesis) = (premise.trim(), hypothesis.trim());
    if premise.is_empty() || hypothesis.is_empty() {
        return None;
    }
    Some(NliExample { premise: premise.into(), hypothesis: hypothesis.into(), label: parse_label(label)? })
}

pub(crate) fn parse_tsv(text: &str) -> Result<(Vec<NliExample>, usize), String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();
    let Some(first) = lines.peek() else {
        return Ok((Vec::new(), 0));
    };
    let header: Vec<String> = first.split('\t').map(|h| h.trim().to_ascii_lowercase()).collect();
    let find = |keys: &[&str]| header.iter().position(|h| keys.contains(&h.as_str()));
    let cols = match (find(&PREMISE_KEYS), find(&HYPOTHESIS_KEYS), find(&LABEL_KEYS)) {
        (Some(p), Some(h), Some(l)) => {
            lines.next();
            (p, h, l)
        }
        (None, None, None) => (0, 1, 2),
        _ => return Err("header must name premise, hypothesis and label columns".into()),
    };
    let mut out = Vec::new();
    let mut skipped = 0;
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        let width = cols.0.max(cols.1).max(cols.2);
        if fields.len() <= width {
            return Err(format!("row {}: expected at least {} tab-separated fields", n + 1, width + 1));
        }
        match make(fields[cols.0], fields[cols.1], fields[cols.2]) {
            Some(e) => out.push(e),
            None => skipped += 1,
        }
    }
    Ok((out, skipped))
}

pub(crate) fn parse_jsonl(text: &str) -> Result<(Vec<NliExample>, usize), String> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", n + 1))?;
        let get = |keys: &[&str]| -> String {
            keys.iter()
                .find_map(|k| v.get(*k))
                .map(|x| match x {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .unwrap_or_default()
        };
        match make(&get(&PREMISE_KEYS), &get(&HYPOTHESIS_KEYS), &get(&LABEL_KEYS)) {
            Some(e) => out.push(e),
            None => skipped += 1,
        }
    }
    Ok((out, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headerless_tsv() {
        let (ex, skipped) = parse_tsv("A cat sat.\tA cat is sitting.\tentailment\nX.\tY.\t-\n").unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(skipped, 1);
        assert_eq!(ex[0].label, NliLabel::Entailment);
    }

    #[test]
    fn glue_style_header() {
        let text = "index\tsentence1\tsentence2\tgold_label\n0\tP one.\tH one.\tcontradiction\n1\tP two.\tH two.\tneutral\n";
        let (ex, _) = parse_tsv(text).unwrap();
        assert_eq!(ex.iter().map(|e| e.label).collect::<Vec<_>>(), vec![NliLabel::Contradiction, NliLabel::Neutral]);
        assert_eq!(ex[1].premise, "P two.");
        assert!(parse_tsv("premise\tfoo\tlabel\nx\ty\tz\n").is_err());
        assert!(parse_tsv("only\ttwo\n").is_err());
    }

    #[test]
    fn jsonl_with_integer_labels() {
        let text = "{\"premise\": \"P.\", \"hypothesis\": \"H.\", \"label\": 2}\n\n{\"sentence1\": \"Q.\", \"sentence2\": \"R.\", \"gold_label\": \"entailment\"}\n{\"premise\": \"\", \"hypothesis\": \"x\", \"label\": 0}";
        let (ex, skipped) = parse_jsonl(text).unwrap();
        assert_eq!(ex.len(), 2);
        assert_eq!(skipped, 1);
        assert_eq!(ex[0].label, NliLabel::Contradiction);
        assert!(parse_jsonl("{").is_err());
    }
}
