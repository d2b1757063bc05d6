//! Porter (1980) suffix-stripping stemmer.
//!
//! Follows the original rule set (steps 1a through 5b) with no later
//! extensions: `abli -> able` in step 2, no `logi` rule, and words of any
//! length are processed.

/// Stem a lowercase token. Tokens containing anything other than ASCII
/// letters are returned unchanged.
pub fn stem(token: &str) -> String {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut w = token.as_bytes().to_vec();
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    step2(&mut w);
    step3(&mut w);
    step4(&mut w);
    step5a(&mut w);
    step5b(&mut w);
    // Only ASCII letters were ever written.
    String::from_utf8(w).expect("stemmer output is ascii")
}

fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Number of VC sequences in `[C](VC)^m[V]`.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let cons = is_consonant(w, i);
        if cons && prev_vowel {
            m += 1;
        }
        prev_vowel = !cons;
    }
    m
}

fn contains_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

/// `*o`: stem ends consonant-vowel-consonant, last not w, x or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

type Condition = fn(&[u8]) -> bool;

struct Rule {
    suffix: &'static [u8],
    replacement: &'static [u8],
    condition: Option<Condition>,
}

const fn rule(suffix: &'static str, replacement: &'static str, condition: Option<Condition>) -> Rule {
    Rule {
        suffix: suffix.as_bytes(),
        replacement: replacement.as_bytes(),
        condition,
    }
}

/// The first rule whose suffix matches decides the outcome; a failed
/// condition leaves the word untouched and stops the scan.
fn apply_rules(w: &mut Vec<u8>, rules: &[Rule]) -> bool {
    for r in rules {
        if w.ends_with(r.suffix) {
            let stem_len = w.len() - r.suffix.len();
            if r.condition.is_none_or(|c| c(&w[..stem_len])) {
                w.truncate(stem_len);
                w.extend_from_slice(r.replacement);
                return true;
            }
            return false;
        }
    }
    false
}

fn m_gt_0(s: &[u8]) -> bool {
    measure(s) > 0
}

fn m_gt_1(s: &[u8]) -> bool {
    measure(s) > 1
}

fn step1a(w: &mut Vec<u8>) {
    const RULES: [Rule; 4] = [
        rule("sses", "ss", None),
        rule("ies", "i", None),
        rule("ss", "ss", None),
        rule("s", "", None),
    ];
    apply_rules(w, &RULES);
}

fn step1b(w: &mut Vec<u8>) {
    if w.ends_with(b"eed") {
        let stem_len = w.len() - 3;
        if measure(&w[..stem_len]) > 0 {
            w.truncate(stem_len);
            w.extend_from_slice(b"ee");
        }
        return;
    }
    let mut stripped = false;
    for suffix in [&b"ed"[..], &b"ing"[..]] {
        if w.ends_with(suffix) && contains_vowel(&w[..w.len() - suffix.len()]) {
            w.truncate(w.len() - suffix.len());
            stripped = true;
            break;
        }
    }
    if !stripped {
        return;
    }
    for (suffix, replacement) in [(&b"at"[..], &b"ate"[..]), (b"bl", b"ble"), (b"iz", b"ize")] {
        if w.ends_with(suffix) {
            w.truncate(w.len() - suffix.len());
            w.extend_from_slice(replacement);
            return;
        }
    }
    if ends_double_consonant(w) {
        if !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
            w.pop();
        }
        return;
    }
    if measure(w) == 1 && ends_cvc(w) {
        w.push(b'e');
    }
}

fn step1c(w: &mut Vec<u8>) {
    const RULES: [Rule; 1] = [rule("y", "i", Some(contains_vowel))];
    apply_rules(w, &RULES);
}

fn step2(w: &mut Vec<u8>) {
    const RULES: [Rule; 20] = [
        rule("ational", "ate", Some(m_gt_0)),
        rule("tional", "tion", Some(m_gt_0)),
        rule("enci", "ence", Some(m_gt_0)),
        rule("anci", "ance", Some(m_gt_0)),
        rule("izer", "ize", Some(m_gt_0)),
        rule("abli", "able", Some(m_gt_0)),
        rule("alli", "al", Some(m_gt_0)),
        rule("entli", "ent", Some(m_gt_0)),
        rule("eli", "e", Some(m_gt_0)),
        rule("ousli", "ous", Some(m_gt_0)),
        rule("ization", "ize", Some(m_gt_0)),
        rule("ation", "ate", Some(m_gt_0)),
        rule("ator", "ate", Some(m_gt_0)),
        rule("alism", "al", Some(m_gt_0)),
        rule("iveness", "ive", Some(m_gt_0)),
        rule("fulness", "ful", Some(m_gt_0)),
        rule("ousness", "ous", Some(m_gt_0)),
        rule("aliti", "al", Some(m_gt_0)),
        rule("iviti", "ive", Some(m_gt_0)),
        rule("biliti", "ble", Some(m_gt_0)),
    ];
    apply_rules(w, &RULES);
}

fn step3(w: &mut Vec<u8>) {
    const RULES: [Rule; 7] = [
        rule("icate", "ic", Some(m_gt_0)),
        rule("ative", "", Some(m_gt_0)),
        rule("alize", "al", Some(m_gt_0)),
        rule("iciti", "ic", Some(m_gt_0)),
        rule("ical", "ic", Some(m_gt_0)),
        rule("ful", "", Some(m_gt_0)),
        rule("ness", "", Some(m_gt_0)),
    ];
    apply_rules(w, &RULES);
}

fn ion_condition(s: &[u8]) -> bool {
    measure(s) > 1 && matches!(s.last(), Some(b's' | b't'))
}

fn step4(w: &mut Vec<u8>) {
    const RULES: [Rule; 19] = [
        rule("al", "", Some(m_gt_1)),
        rule("ance", "", Some(m_gt_1)),
        rule("ence", "", Some(m_gt_1)),
        rule("er", "", Some(m_gt_1)),
        rule("ic", "", Some(m_gt_1)),
        rule("able", "", Some(m_gt_1)),
        rule("ible", "", Some(m_gt_1)),
        rule("ant", "", Some(m_gt_1)),
        rule("ement", "", Some(m_gt_1)),
        rule("ment", "", Some(m_gt_1)),
        rule("ent", "", Some(m_gt_1)),
        rule("ion", "", Some(ion_condition)),
        rule("ou", "", Some(m_gt_1)),
        rule("ism", "", Some(m_gt_1)),
        rule("ate", "", Some(m_gt_1)),
        rule("iti", "", Some(m_gt_1)),
        rule("ous", "", Some(m_gt_1)),
        rule("ive", "", Some(m_gt_1)),
        rule("ize", "", Some(m_gt_1)),
    ];
    apply_rules(w, &RULES);
}

fn step5a(w: &mut Vec<u8>) {
    if w.ends_with(b"e") {
        let stem = &w[..w.len() - 1];
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            w.pop();
        }
    }
}

fn step5b(w: &mut Vec<u8>) {
    if w.ends_with(b"ll") && measure(&w[..w.len() - 1]) > 1 {
        w.pop();
    }
}
