//! Acceptance criteria. Run with `--nocapture` to see one PASS/FAIL/SKIP
//! line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use storylink::backends::stub::{HashingEmbedder, ScriptedNli};
use storylink::backends::{EmbeddingBackend, NliProbabilities};
use storylink::claims::{claim_id, Claim, ExtractionMethod};
use storylink::config::PipelineConfig;
use storylink::eval::{build_eval_set, build_eval_set_from, evaluate_filter, load_nli_pairs, EvalPair, FilterMetrics, Gold, PairScorer};
use storylink::filter::{
    cross_article_pair_count, embed_filter, lexical_filter, porter, tokens, CandidatePair, FilterConfig, FilterMethod,
};
use storylink::link::{link_candidates, NliLabel, SentenceRef};
use storylink::store::ClusterDocument;

fn report(name: &str, ok: bool, detail: impl std::fmt::Display) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn skip(name: &str, why: &str) {
    println!("SKIP {name}: {why}");
}

const WORDS: &[&str] = &[
    "the", "a", "of", "river", "rivers", "flood", "flooded", "flooding", "bridge", "bridges", "closed", "closing",
    "mayor", "council", "residents", "evacuated", "evacuation", "water", "rose", "rising", "meters", "town", "north",
    "road", "roads", "rain", "storm", "police", "said", "was", "not", "never", "school", "shelter", "opened", "crews",
];

fn random_claims(rng: &mut ChaCha8Rng, articles: usize, per_article: usize, words: &[&str]) -> Vec<Claim> {
    let mut out: Vec<Claim> = Vec::new();
    for a in 0..articles {
        let article_id = format!("a{a:03}");
        for s in 0..per_article {
            let text = if !out.is_empty() && rng.random_bool(0.1) {
                out.choose(rng).unwrap().text.clone()
            } else {
                let n = rng.random_range(2..9);
                (0..n).map(|_| *words.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
            };
            out.push(Claim {
                claim_id: claim_id(&article_id, s, 0),
                article_id: article_id.clone(),
                sentence_index: s,
                text,
                extraction_method: ExtractionMethod::Passthrough,
            });
        }
    }
    out
}

type PairScores = BTreeMap<(String, String), f64>;

fn key(a: &str, b: &str) -> (String, String) {
    if a < b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

/// All cross-article pairs scored, each claim's k best kept, then thresholded.
fn topk_oracle(claims: &[Claim], vectors: &[Vec<f64>], k: usize, threshold: f64) -> (PairScores, usize) {
    let mut kept = PairScores::new();
    let mut retained = 0;
    for (i, ci) in claims.iter().enumerate() {
        let mut scored: Vec<(f64, &str)> = claims
            .iter()
            .enumerate()
            .filter(|(_, cj)| cj.article_id != ci.article_id)
            .map(|(j, cj)| (vectors[i].iter().zip(&vectors[j]).map(|(x, y)| x * y).sum::<f64>(), cj.claim_id.as_str()))
            .collect();
        scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(y.1)));
        for (s, id) in scored.into_iter().take(k).filter(|(s, _)| *s >= threshold) {
            retained += 1;
            kept.insert(key(&ci.claim_id, id), s);
        }
    }
    (kept, retained)
}

fn jaccard_oracle(claims: &[Claim], threshold: f64) -> PairScores {
    let sets: Vec<BTreeSet<String>> = claims.iter().map(|c| tokens::term_set(&c.text)).collect();
    let mut kept = PairScores::new();
    for i in 0..claims.len() {
        for j in i + 1..claims.len() {
            if claims[i].article_id == claims[j].article_id {
                continue;
            }
            let inter = sets[i].intersection(&sets[j]).count();
            let union = sets[i].union(&sets[j]).count();
            if inter > 0 && inter as f64 / union as f64 >= threshold {
                kept.insert(key(&claims[i].claim_id, &claims[j].claim_id), inter as f64 / union as f64);
            }
        }
    }
    kept
}

fn as_map(cands: &[CandidatePair]) -> PairScores {
    cands.iter().map(|c| ((c.claim_a.clone(), c.claim_b.clone()), c.score)).collect()
}

fn same_pairs(got: &PairScores, want: &PairScores) -> bool {
    got.len() == want.len()
        && got.iter().zip(want).all(|((gk, gs), (wk, ws))| gk == wk && (gs - ws).abs() < 1e-12)
}

#[test]
fn filter_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let claims = random_claims(&mut rng, 5, 10, WORDS);
    assert_eq!(claims.len(), 50);
    let embedder = HashingEmbedder::default();
    let texts: Vec<String> = claims.iter().map(|c| c.text.clone()).collect();
    let vectors = embedder.embed(&texts).unwrap();

    let mut failures = Vec::new();
    let mut checked = 0;
    for (k, threshold) in [(16, 0.3), (3, 0.3), (1, 0.0), (5, 0.6)] {
        let cfg = FilterConfig { top_k: k, cosine_threshold: threshold, ..Default::default() };
        let got = embed_filter(&claims, &embedder, &cfg).unwrap();
        let (want, retained) = topk_oracle(&claims, &vectors, k, threshold);
        checked += want.len();
        if !same_pairs(&as_map(&got.candidates), &want) || got.retained_before_dedup != retained {
            failures.push(format!("es k={k} t={threshold}"));
        }
    }
    for threshold in [0.1, 0.25, 0.5, 1.0] {
        let cfg = FilterConfig { method: FilterMethod::LexicalOverlap, jaccard_threshold: threshold, ..Default::default() };
        let got = lexical_filter(&claims, &cfg);
        let want = jaccard_oracle(&claims, threshold);
        checked += want.len();
        if !same_pairs(&as_map(&got.candidates), &want) {
            failures.push(format!("leo t={threshold}"));
        }
    }
    let elapsed = start.elapsed();
    report(
        "filter-oracle equivalence",
        failures.is_empty() && elapsed < Duration::from_secs(5),
        format!("{checked} oracle pairs over 8 settings, mismatches {failures:?}, {elapsed:.2?} (limit 5s)"),
    );
}

struct Counts {
    tp: f64,
    fp: f64,
    tn: f64,
    fn_: f64,
}

fn brute_force_metrics(pairs: &[EvalPair], scores: &[f64], threshold: f64) -> [f64; 4] {
    let mut c = Counts { tp: 0.0, fp: 0.0, tn: 0.0, fn_: 0.0 };
    for (p, s) in pairs.iter().zip(scores) {
        let kept = *s >= threshold;
        match (p.gold == Gold::Positive, kept) {
            (true, true) => c.tp += 1.0,
            (true, false) => c.fn_ += 1.0,
            (false, true) => c.fp += 1.0,
            (false, false) => c.tn += 1.0,
        }
    }
    let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
    let f = |p: f64, r: f64| if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    let precision = div(c.tp, c.tp + c.fp);
    let recall = div(c.tp, c.tp + c.fn_);
    let npv = div(c.tn, c.tn + c.fn_);
    let tnr = div(c.tn, c.tn + c.fp);
    [precision, recall, (f(precision, recall) + f(npv, tnr)) / 2.0, tnr]
}

fn as_array(m: &FilterMetrics) -> [f64; 4] {
    [m.precision, m.recall, m.macro_f1, m.tnr]
}

#[test]
fn metrics_oracle() {
    let pairs = build_eval_set(&common::data_dir().join("desk_nli_200.tsv"), 100, 1980).unwrap();
    assert_eq!(pairs.len(), 200);
    let positives: Vec<EvalPair> = pairs.iter().filter(|p| p.gold == Gold::Positive).cloned().collect();
    let negatives: Vec<EvalPair> = pairs.iter().filter(|p| p.gold == Gold::Negative).cloned().collect();
    assert_eq!((positives.len(), negatives.len()), (100, 100));

    let embedder = HashingEmbedder::default();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (set_name, set) in [("mixed", &pairs), ("all-positive", &positives), ("all-negative", &negatives)] {
        for (scorer, thresholds) in
            [(PairScorer::Lexical, [0.0, 0.1, 0.3, 1.0]), (PairScorer::Embedding(&embedder), [0.0, 0.3, 0.6, 1.0])]
        {
            let scores: Vec<f64> = match &scorer {
                PairScorer::Lexical => {
                    set.iter().map(|p| storylink::filter::lexical_overlap_score(&p.text_a, &p.text_b)).collect()
                }
                PairScorer::Embedding(e) => set
                    .iter()
                    .map(|p| {
                        let v = e.embed(&[p.text_a.clone(), p.text_b.clone()]).unwrap();
                        storylink::backends::cosine_similarity(&v[0], &v[1])
                    })
                    .collect(),
            };
            for t in thresholds {
                let got = as_array(&evaluate_filter(&scorer, t, set).unwrap());
                let want = brute_force_metrics(set, &scores, t);
                checked += 1;
                if got != want {
                    mismatches.push(format!("{set_name} {} t={t}: {got:?} vs {want:?}", scorer.method().short_name()));
                }
            }
        }
    }
    report("metrics oracle", mismatches.is_empty(), format!("{checked} configurations, mismatches {mismatches:?}"));
}

/// A 1,000-pair set: the first 500 labelled positives of the split, plus 500
/// seeded negatives drawn from the premises seen up to that point.
fn banded_eval_set(path: &std::path::Path) -> Vec<EvalPair> {
    let examples = load_nli_pairs(path).unwrap();
    let mut positives = 0;
    let cut = examples
        .iter()
        .position(|e| {
            positives += usize::from(e.label != NliLabel::Neutral);
            positives == 500
        })
        .expect("split has at least 500 entailment/contradiction pairs");
    let pairs = build_eval_set_from(&examples[..=cut], 500, 1980).unwrap();
    assert_eq!(pairs.len(), 1000);
    pairs
}

fn nli_split() -> PathBuf {
    std::env::var_os("STORYLINK_NLI_SPLIT")
        .map(PathBuf::from)
        .unwrap_or_else(|| common::data_dir().join("nli_validation.tsv"))
}

#[test]
fn leo_banded_reproduction() {
    let name = "LeO banded reproduction";
    let path = nli_split();
    if !path.exists() {
        report(name, false, format!("no NLI validation split at {} (set STORYLINK_NLI_SPLIT)", path.display()));
    }
    let start = Instant::now();
    let pairs = banded_eval_set(&path);
    let m = evaluate_filter(&PairScorer::Lexical, 0.1, &pairs).unwrap();
    let elapsed = start.elapsed();
    let again = evaluate_filter(&PairScorer::Lexical, 0.1, &banded_eval_set(&path)).unwrap();
    let ok = (m.tnr - 0.9138).abs() <= 0.07
        && (m.recall - 0.8891).abs() <= 0.07
        && m == again
        && elapsed < Duration::from_secs(30);
    report(
        name,
        ok,
        format!(
            "TNR {:.4} (0.9138 ± 0.07), recall {:.4} (0.8891 ± 0.07), precision {:.4}, macro-F1 {:.4}, {elapsed:.2?}",
            m.tnr, m.recall, m.precision, m.macro_f1
        ),
    );
}

#[test]
fn es_banded_reproduction_live() {
    let name = "ES banded reproduction (live)";
    let Some(cfg_path) = std::env::var_os("STORYLINK_LIVE_CONFIG") else {
        skip(name, "STORYLINK_LIVE_CONFIG not set");
        return;
    };
    let path = nli_split();
    if !path.exists() {
        report(name, false, format!("no NLI validation split at {}", path.display()));
    }
    let cfg = PipelineConfig::load(std::path::Path::new(&cfg_path)).unwrap();
    let backends = cfg.build_backends().unwrap();
    let start = Instant::now();
    let pairs = banded_eval_set(&path);
    let es = evaluate_filter(&PairScorer::Embedding(backends.embedding.as_ref()), 0.3, &pairs).unwrap();
    let elapsed = start.elapsed();
    let leo = evaluate_filter(&PairScorer::Lexical, 0.1, &pairs).unwrap();
    let dominates = as_array(&es).iter().zip(as_array(&leo)).all(|(e, l)| *e >= l);
    report(
        name,
        es.tnr >= 0.95 && es.recall >= 0.90 && dominates && elapsed < Duration::from_secs(300),
        format!("ES {:?} vs LeO {:?} [P, R, F1, TNR], {elapsed:.2?}", as_array(&es), as_array(&leo)),
    );
}

#[test]
fn complexity_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(1500);
    let vocab: Vec<String> = (0..400).map(|i| format!("term{i}")).collect();
    let words: Vec<&str> = vocab.iter().map(String::as_str).collect();
    let claims = random_claims(&mut rng, 50, 30, &words);
    let cross = cross_article_pair_count(claims.iter().map(|c| c.article_id.as_str()));
    let start = Instant::now();
    let out = embed_filter(&claims, &HashingEmbedder::default(), &FilterConfig::default()).unwrap();
    let elapsed = start.elapsed();
    report(
        "complexity budget",
        cross > 1_000_000 && out.retained_before_dedup <= 24_000 && elapsed < Duration::from_secs(10),
        format!(
            "{} claims, {cross} cross-article pairs, {} retained before dedup (limit 24000), {} candidates, {elapsed:.2?} (limit 10s)",
            claims.len(),
            out.retained_before_dedup,
            out.candidates.len()
        ),
    );
}

#[test]
fn cap_semantics() {
    let mut claims = Vec::new();
    let mut candidates = Vec::new();
    let mut nli = ScriptedNli::new();
    let mut planted = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(250);
    let mut confidences: Vec<u32> = (0..250).collect();
    for i in (1..confidences.len()).rev() {
        confidences.swap(i, rng.random_range(0..=i));
    }
    // 250 scripted entailments plus 50 pairs the backend calls neutral.
    for i in 0..300 {
        let (a, b) = (claim_id("a", i, 0), claim_id("b", i, 0));
        for (id, art) in [(&a, "a"), (&b, "b")] {
            claims.push(Claim {
                claim_id: id.clone(),
                article_id: art.into(),
                sentence_index: i,
                text: format!("{art} claim {i}"),
                extraction_method: ExtractionMethod::Passthrough,
            });
        }
        if let Some(&rank) = confidences.get(i) {
            let e = 0.5 + f64::from(rank) / 1000.0;
            let rest = (1.0 - e) / 2.0;
            nli.insert(&format!("a claim {i}"), &format!("b claim {i}"), NliProbabilities {
                entailment: e,
                contradiction: rest,
                neutral: rest,
            });
            planted.push((e, a.clone(), b.clone()));
        }
        candidates.push(CandidatePair { claim_a: a, claim_b: b, score: 0.5, method: FilterMethod::EmbeddingSimilarity });
    }
    planted.sort_by(|x, y| y.0.total_cmp(&x.0));
    let want: Vec<(String, String)> = planted.iter().take(100).map(|(_, a, b)| (a.clone(), b.clone())).collect();

    let links = link_candidates(&candidates, &claims, &nli, 100, 8);
    let got: Vec<(String, String)> = links.iter().map(|l| (l.premise_claim.clone(), l.hypothesis_claim.clone())).collect();
    let neutral = links.iter().filter(|l| l.label == NliLabel::Neutral).count();
    let entail = links.iter().filter(|l| l.label == NliLabel::Entailment).count();
    let same_set: HashSet<_> = got.iter().collect::<HashSet<_>>();
    let ok = links.len() == 100
        && neutral == 0
        && entail == 100
        && same_set == want.iter().collect()
        && links.windows(2).all(|w| w[0].confidence >= w[1].confidence)
        && (links[99].confidence - planted[99].0).abs() < 1e-12;
    report(
        "cap semantics",
        ok,
        format!("{} links from 300 candidates (250 entailing), {neutral} neutral, lowest kept confidence {:.3}", links.len(), links.last().map_or(0.0, |l| l.confidence)),
    );
}

fn run_cli(data_dir: &std::path::Path) -> Vec<u8> {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_storylink"))
        .args(["--profile", "stub", "--data-dir"])
        .arg(data_dir)
        .arg("run")
        .arg(common::story_manifest())
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(data_dir.join("clusters/ashwater-river-flood-in-millbrook-5f74cc09.json")).unwrap()
}

#[test]
fn end_to_end_determinism() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_cli(d1.path());
    let second = run_cli(d2.path());
    let golden = std::fs::read(common::data_dir().join("story/golden_cluster.json")).unwrap();
    let doc: ClusterDocument = serde_json::from_slice(&first).unwrap();

    let links = doc.links.as_ref().unwrap();
    let count = |l| links.iter().filter(|x| x.label == l).count();
    let claims: BTreeMap<&str, &Claim> = doc.claims.as_ref().unwrap().iter().map(|c| (c.claim_id.as_str(), c)).collect();

    // Every claim link lands on the sentences its claims came from, and every
    // sentence link is backed by a claim link with the same label and confidence.
    let sref = |id: &str| SentenceRef { article_id: claims[id].article_id.clone(), sentence_index: claims[id].sentence_index };
    let mut expected: BTreeMap<(SentenceRef, SentenceRef, NliLabel), f64> = BTreeMap::new();
    for l in links {
        let (mut x, mut y) = (sref(&l.premise_claim), sref(&l.hypothesis_claim));
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        let e = expected.entry((x, y, l.label)).or_insert(0.0);
        *e = e.max(l.confidence);
    }
    let projected: BTreeMap<(SentenceRef, SentenceRef, NliLabel), f64> = doc
        .sentence_links
        .as_ref()
        .unwrap()
        .iter()
        .map(|s| ((s.focus.clone(), s.evidence.clone(), s.label), s.confidence))
        .collect();
    let texts_match = doc.sentence_links.as_ref().unwrap().iter().all(|s| {
        claims.values().any(|c| c.article_id == s.focus.article_id && c.sentence_index == s.focus.sentence_index && c.text == s.focus_claim_text)
            && claims.values().any(|c| {
                c.article_id == s.evidence.article_id && c.sentence_index == s.evidence.sentence_index && c.text == s.evidence_claim_text
            })
    });

    let ok = first == second
        && first == golden
        && count(NliLabel::Entailment) == 10
        && count(NliLabel::Contradiction) == 10
        && links.len() == 20
        && projected == expected
        && texts_match;
    report(
        "end-to-end determinism",
        ok,
        format!(
            "{} bytes, runs identical {}, matches golden {}, {} entailment + {} contradiction links, {} sentence links",
            first.len(),
            first == second,
            first == golden,
            count(NliLabel::Entailment),
            count(NliLabel::Contradiction),
            projected.len()
        ),
    );
}

#[test]
fn porter_conformance() {
    let text = std::fs::read_to_string(common::data_dir().join("porter_vocab.tsv")).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    let wrong: Vec<String> = rows
        .iter()
        .filter(|r| porter::stem(r[0]) != r[1])
        .map(|r| format!("{} -> {} (want {})", r[0], porter::stem(r[0]), r[1]))
        .collect();
    report(
        "Porter conformance",
        rows.len() == 1000 && wrong.is_empty(),
        format!("{}/{} words agree {:?}", rows.len() - wrong.len(), rows.len(), wrong.iter().take(5).collect::<Vec<_>>()),
    );
}
