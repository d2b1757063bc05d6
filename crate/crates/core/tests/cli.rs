mod common;

use std::path::Path;
use std::process::{Command, Output};

const CLUSTER: &str = "ashwater-river-flood-in-millbrook-5f74cc09";

fn storylink(data_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_storylink"))
        .arg("--data-dir")
        .arg(data_dir)
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn staged_commands_match_run() {
    let manifest = common::story_manifest();
    let staged = tempfile::tempdir().unwrap();
    let out = storylink(staged.path(), &["ingest", manifest.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with(CLUSTER));

    let out = storylink(staged.path(), &["filter", CLUSTER]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("claims missing; run extract"), "{}", stderr(&out));

    for stage in ["extract", "filter", "link", "annotate"] {
        let out = storylink(staged.path(), &[stage, CLUSTER]);
        assert!(out.status.success(), "{stage}: {}", stderr(&out));
    }
    let all = tempfile::tempdir().unwrap();
    assert!(storylink(all.path(), &["run", manifest.to_str().unwrap()]).status.success());

    let file = format!("clusters/{CLUSTER}.json");
    assert_eq!(std::fs::read(staged.path().join(&file)).unwrap(), std::fs::read(all.path().join(&file)).unwrap());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("storylink.toml");
    std::fs::write(&cfg, "link_cap = 3\n[filter]\nmethod = \"embedding_similarity\"\n").unwrap();
    let manifest = common::story_manifest();
    let out = storylink(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "run", manifest.to_str().unwrap(), "--method", "leo", "--cap", "4"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join(format!("clusters/{CLUSTER}.json"))).unwrap()).unwrap();
    assert_eq!(doc["filter"]["config"]["method"], "lexical_overlap");
    assert_eq!(doc["link_cap"], 4);
    assert_eq!(doc["links"].as_array().unwrap().len(), 8);
}

#[test]
fn eval_prints_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = common::data_dir().join("desk_nli_200.tsv");
    let json_path = dir.path().join("metrics.json");
    let out = storylink(
        dir.path(),
        &["eval", "--method", "leo", "--input", input.to_str().unwrap(), "--negatives", "100", "--seed", "7", "--output", json_path.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("macro-F1"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
    assert_eq!(report["method"], "lexical_overlap");
    assert_eq!(report["positives"], 100);
    assert_eq!(report["negatives"], 100);
    assert_eq!(report["seed"], 7);
    let m = &report["metrics"];
    let total: u64 = ["tp", "fp", "tn", "fn"].iter().map(|k| m[*k].as_u64().unwrap()).sum();
    assert_eq!(total, 200);
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(storylink(dir.path(), &["filter"]).status.code(), Some(2));
    assert_eq!(storylink(dir.path(), &["run", "x.json", "--method", "bogus"]).status.code(), Some(2));
    let out = storylink(dir.path(), &["extract", "no-such-cluster"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not found"));
    let out = storylink(dir.path(), &["run", "missing-manifest.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = storylink(dir.path(), &["run", "x.json", "--cosine-threshold", "3"]);
    assert_eq!(out.status.code(), Some(1));
}
